#include "tdlite/ground.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace tdl {

namespace {

const char* kSyntheticConstant = "w__0";

std::string sanitize(const std::string& name) {
  std::string s;
  for (char ch : name) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (c == '_' && !s.empty() && s.back() == '_') continue;
    s += c;
  }
  while (true) {
    if (!s.empty() && s.back() == '_') {
      s.pop_back();
    } else if (s.size() > 4 && s.ends_with("_inv")) {
      s.resize(s.size() - 4);
    } else {
      break;
    }
  }
  return s;
}

template <typename Names>
std::map<std::string, std::string> assign_tokens(const Names& names) {
  std::map<std::string, std::string> out;
  std::set<std::string> used;
  for (const auto& n : names) {
    std::string base = sanitize(n);
    std::string tok = base;
    for (int k = 2; used.contains(tok); ++k) tok = base + "_" + std::to_string(k);
    used.insert(tok);
    out.emplace(n, tok);
  }
  return out;
}

}  // namespace

GroundingContext::GroundingContext(const KnowledgeBase& kb, const TranslationContext& ctx) {
  concept_tokens_ = assign_tokens(kb.signature.concept_names);
  role_tokens_ = assign_tokens(kb.signature.roles());
  std::set<std::string> individuals = kb.signature.individuals;
  auto used = abox_individuals(kb);
  individuals.insert(used.begin(), used.end());
  individual_tokens_ = assign_tokens(individuals);
  for (const auto& a : used) constants_.push_back(Term::constant(a));
  for (const auto& r : ctx.roles) constants_.push_back(Term::witness(r));
  if (constants_.empty()) constants_.push_back(Term::constant(kSyntheticConstant));
}

std::string GroundingContext::role_token(const Role& r) const {
  auto it = role_tokens_.find(r.name);
  std::string tok = it != role_tokens_.end() ? it->second : sanitize(r.name);
  return r.inverted ? tok + "_inv" : tok;
}

std::string GroundingContext::constant_token(const Term& t) const {
  if (t.kind == Term::Kind::Witness) return "w__" + role_token(t.role);
  if (t.individual == kSyntheticConstant) return kSyntheticConstant;
  auto it = individual_tokens_.find(t.individual);
  return it != individual_tokens_.end() ? it->second : sanitize(t.individual);
}

std::string GroundingContext::prop_name(const Predicate& p, const Term& t) const {
  if (p.cardinality) return "geq_" + std::to_string(p.q) + "__" + role_token(p.role) + "__" + constant_token(t);
  auto it = concept_tokens_.find(p.concept_name);
  std::string tok = it != concept_tokens_.end() ? it->second : sanitize(p.concept_name);
  return "c_" + tok + "__" + constant_token(t);
}

std::string GroundingContext::role_prop_name(const Role& r) const { return "p__" + role_token(r); }

namespace {

Ltl instantiate(const Qtl& f, const Term& c, const GroundingContext& g) {
  switch (f.op()) {
    case QtlOp::Falsum:
      return Ltl::falsum();
    case QtlOp::UnaryAtom:
      return Ltl::prop(g.prop_name(f.predicate(), f.term().kind == Term::Kind::Var ? c : f.term()));
    case QtlOp::PropAtom:
      return Ltl::prop(g.role_prop_name(f.role()));
    case QtlOp::Not:
      return Ltl::negation(instantiate(f.operand(), c, g));
    case QtlOp::And:
      return Ltl::conj(instantiate(f.lhs(), c, g), instantiate(f.rhs(), c, g));
    case QtlOp::NextF:
      return Ltl::next_f(instantiate(f.operand(), c, g));
    case QtlOp::NextP:
      return Ltl::next_p(instantiate(f.operand(), c, g));
    case QtlOp::SomeF:
      return Ltl::some_f(instantiate(f.operand(), c, g));
    case QtlOp::SomeP:
      return Ltl::some_p(instantiate(f.operand(), c, g));
    case QtlOp::AlwF:
      return ltl::always_f(instantiate(f.operand(), c, g));
    case QtlOp::AlwP:
      return ltl::always_p(instantiate(f.operand(), c, g));
    case QtlOp::ForAll: {
      std::vector<Ltl> parts;
      for (const auto& k : g.constants()) parts.push_back(instantiate(f.operand(), k, g));
      return ltl::conj_all(parts);
    }
  }
  return Ltl::falsum();
}

}  // namespace

Ltl ground(const Qtl& f, const GroundingContext& gctx) {
  if (gctx.constants().empty()) throw Error("EMPTY_CONSTANT_SET", "no constants to ground over");
  return instantiate(f, Term::var(), gctx);
}

Ltl ground(const QtlTranslation& t, const GroundingContext& gctx) {
  std::vector<Ltl> parts;
  for (const auto& c : t.conjuncts()) parts.push_back(ground(c, gctx));
  return ltl::conj_all(parts);
}

}  // namespace tdl
