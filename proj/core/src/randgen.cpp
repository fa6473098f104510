#include "tdlite/randgen.hpp"

#include <algorithm>
#include <cmath>

namespace tdl {

namespace {

using K = ConceptKind;

std::string concept_name(std::size_t i) { return "A" + std::to_string(i + 1); }
std::string role_name(std::size_t i) { return "R" + std::to_string(i + 1); }

template <typename T>
T pick(const std::vector<T>& items, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
  return items[d(rng)];
}

Concept random_basic(const BatchSpec& spec, Rng& rng) {
  // Pool: A1..AN, then >= q R and >= q R- for every q and R, then BOT.
  const std::size_t atoms = spec.N;
  const std::size_t counts = 2 * spec.N * spec.Q;
  const std::size_t pool = atoms + counts + (spec.allow_bottom ? 1 : 0);
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng);
  if (i < atoms) return Concept::atomic(concept_name(i));
  i -= atoms;
  if (i == counts) return Concept::bottom();
  const std::size_t role = i / (2 * spec.Q);
  const std::size_t rest = i % (2 * spec.Q);
  const auto q = static_cast<std::uint32_t>(rest / 2 + 1);
  return Concept::at_least(q, Role{role_name(role), rest % 2 == 1});
}

// Operators with their weights for a node of length `len` (>= 2).
std::vector<std::pair<K, double>> operator_weights(std::size_t len, const BatchSpec& spec) {
  const bool z = spec.flow == Flow::Z;
  std::vector<K> modal = z ? std::vector<K>{K::SomeF, K::SomeP, K::AlwF, K::AlwP} : std::vector<K>{K::SomeF, K::AlwF};
  std::vector<K> other = z ? std::vector<K>{K::Not, K::NextF, K::NextP} : std::vector<K>{K::Not, K::NextF};
  if (len >= 3) other.push_back(K::And);
  std::vector<std::pair<K, double>> out;
  if (spec.Pt) {
    for (K k : modal) out.emplace_back(k, *spec.Pt / static_cast<double>(modal.size()));
    for (K k : other) out.emplace_back(k, (1 - *spec.Pt) / static_cast<double>(other.size()));
  } else {
    for (K k : modal) out.emplace_back(k, 1.0);
    for (K k : other) out.emplace_back(k, 1.0);
  }
  return out;
}

}  // namespace

void check_spec(const BatchSpec& spec) {
  auto bad = [](const std::string& what) { throw Error("INVALID_SPEC", what); };
  if (spec.F < 1 || spec.N < 1 || spec.Lt < 1 || spec.Lc < 1) bad("F, N, Lt and Lc must be at least 1");
  if (spec.Q < 1) bad("Q must be at least 1");
  if (spec.Pt && (*spec.Pt < 0 || *spec.Pt > 1)) bad("Pt must lie in [0, 1]");
  if (spec.Pg < 0 || spec.Pg > 1) bad("Pg must lie in [0, 1]");
  if (spec.window_lo() > spec.window_hi()) bad("empty timestamp window");
  if (spec.flow == Flow::N && spec.window_lo() < 0) bad("the N flow needs timestamps >= 0");
}

Concept random_concept(std::size_t len, const BatchSpec& spec, Rng& rng) {
  if (len <= 1) return random_basic(spec, rng);
  auto weights = operator_weights(len, spec);
  std::vector<double> w;
  for (const auto& [k, p] : weights) w.push_back(p);
  K op = weights[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng)].first;
  if (op == K::And) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, len - 2)(rng);
    Concept lhs = random_concept(k, spec, rng);
    Concept rhs = random_concept(len - k - 1, spec, rng);
    return Concept::conj(std::move(lhs), std::move(rhs));
  }
  return Concept::unary(op, random_concept(len - 1, spec, rng));
}

KnowledgeBase random_tbox(const BatchSpec& spec, Rng& rng) {
  check_spec(spec);
  KnowledgeBase kb;
  std::bernoulli_distribution global(spec.Pg);
  for (std::size_t i = 0; i < spec.N; ++i) {
    kb.signature.concept_names.insert(concept_name(i));
    (global(rng) ? kb.signature.global_roles : kb.signature.local_roles).insert(role_name(i));
  }
  // A KB may not repeat an axiom (up to normalization), so repeats are redrawn.
  std::vector<ConceptInclusion> seen;
  std::size_t attempts = 0;
  while (kb.tbox.size() < spec.Lt) {
    if (attempts++ > 1000 * spec.Lt) throw Error("INVALID_SPEC", "too few distinct CIs of this length");
    Concept lhs = random_concept(spec.Lc, spec, rng);
    Concept rhs = random_concept(spec.Lc, spec, rng);
    ConceptInclusion key{normalize(lhs), normalize(rhs), {}};
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    kb.tbox.push_back(ConceptInclusion{std::move(lhs), std::move(rhs), {}});
  }
  return kb;
}

KnowledgeBase random_abox(const KnowledgeBase& kb, std::size_t size, const BatchSpec& spec, Rng& rng) {
  KnowledgeBase out = kb;
  if (size == 0) return out;
  const auto pool = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(size)))) + 1;
  std::vector<std::string> individuals;
  for (std::size_t i = 0; i < pool; ++i) individuals.push_back("a" + std::to_string(i + 1));
  std::vector<std::string> concepts(kb.signature.concept_names.begin(), kb.signature.concept_names.end());
  std::vector<std::string> roles = kb.signature.roles();
  std::bernoulli_distribution is_concept(0.5);
  std::bernoulli_distribution positive(0.75);
  std::uniform_int_distribution<std::int64_t> time(spec.window_lo(), spec.window_hi());
  // Duplicates are redrawn; give up once the space is clearly exhausted.
  std::size_t attempts = 0;
  while (out.abox.size() - kb.abox.size() < size && attempts++ < 100 * size) {
    Assertion a;
    bool concept_side = roles.empty() || (!concepts.empty() && is_concept(rng));
    if (concept_side) {
      if (concepts.empty()) break;
      ConceptAssertion c;
      c.positive = positive(rng);
      c.concept_name = pick(concepts, rng);
      c.individual = pick(individuals, rng);
      c.time = time(rng);
      a = c;
    } else {
      RoleAssertion r;
      r.positive = positive(rng);
      r.role_name = pick(roles, rng);
      r.subject = pick(individuals, rng);
      r.object = pick(individuals, rng);
      r.time = time(rng);
      a = r;
    }
    if (std::find(out.abox.begin(), out.abox.end(), a) == out.abox.end()) out.abox.push_back(std::move(a));
  }
  for (const auto& name : abox_individuals(out)) out.signature.individuals.insert(name);
  return out;
}

std::uint64_t instance_seed(std::uint64_t batch_seed, std::size_t index) { return batch_seed ^ index; }

KnowledgeBase random_instance(const BatchSpec& spec, std::size_t index) {
  Rng rng(instance_seed(spec.seed, index));
  KnowledgeBase kb = random_tbox(spec, rng);
  if (spec.abox_size > 0) kb = random_abox(kb, spec.abox_size, spec, rng);
  return kb;
}

}  // namespace tdl
