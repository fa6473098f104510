#include "tdlite/kb.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <tuple>
#include <unordered_set>

#include "hash_util.hpp"

namespace tdl {

std::string Role::str() const { return inverted ? name + "-" : name; }

struct Concept::Node {
  ConceptKind kind;
  std::string name;
  std::uint32_t q = 0;
  Role role;
  Concept a{nullptr};
  Concept b{nullptr};
  std::size_t size = 1;
  std::size_t hash = 0;
};

namespace {

std::size_t seed_hash(ConceptKind kind) { return static_cast<std::size_t>(kind) * 0x100000001b3ULL + 17; }

}  // namespace

Concept Concept::bottom() {
  static const Concept kBottom = [] {
    auto n = std::make_shared<Node>();
    n->kind = ConceptKind::Bottom;
    n->hash = seed_hash(ConceptKind::Bottom);
    return Concept(std::move(n));
  }();
  return kBottom;
}

Concept Concept::top() {
  auto n = std::make_shared<Node>();
  n->kind = ConceptKind::Top;
  n->hash = seed_hash(ConceptKind::Top);
  return Concept(std::move(n));
}

Concept Concept::atomic(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ConceptKind::Atomic;
  n->hash = detail::hash_mix(seed_hash(ConceptKind::Atomic), std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Concept(std::move(n));
}

Concept Concept::at_least(std::uint32_t q, Role role) {
  auto n = std::make_shared<Node>();
  n->kind = ConceptKind::AtLeast;
  std::size_t h = detail::hash_mix(seed_hash(ConceptKind::AtLeast), q);
  h = detail::hash_mix(h, std::hash<std::string>{}(role.name));
  n->hash = detail::hash_mix(h, role.inverted ? 1 : 2);
  n->q = q;
  n->role = std::move(role);
  return Concept(std::move(n));
}

Concept Concept::unary(ConceptKind kind, Concept operand) {
  assert(is_unary_kind(kind));
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->size = 1 + operand.size();
  n->hash = detail::hash_mix(seed_hash(kind), operand.hash());
  n->a = std::move(operand);
  return Concept(std::move(n));
}

Concept Concept::binary(ConceptKind kind, Concept lhs, Concept rhs) {
  assert(is_binary_kind(kind));
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->size = 1 + lhs.size() + rhs.size();
  n->hash = detail::hash_mix(detail::hash_mix(seed_hash(kind), lhs.hash()), rhs.hash());
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Concept(std::move(n));
}

ConceptKind Concept::kind() const { return node_->kind; }
const std::string& Concept::name() const { return node_->name; }
std::uint32_t Concept::cardinality() const { return node_->q; }
const Role& Concept::role() const { return node_->role; }
const Concept& Concept::operand() const { return node_->a; }
const Concept& Concept::lhs() const { return node_->a; }
const Concept& Concept::rhs() const { return node_->b; }
std::size_t Concept::size() const { return node_->size; }
std::size_t Concept::hash() const { return node_->hash; }

bool Concept::is_basic() const {
  auto k = kind();
  return k == ConceptKind::Bottom || k == ConceptKind::Atomic || k == ConceptKind::AtLeast;
}
bool Concept::is_unary() const { return is_unary_kind(kind()); }
bool Concept::is_binary() const { return is_binary_kind(kind()); }

bool operator==(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case ConceptKind::Bottom:
    case ConceptKind::Top:
      return true;
    case ConceptKind::Atomic:
      return a.name() == b.name();
    case ConceptKind::AtLeast:
      return a.cardinality() == b.cardinality() && a.role() == b.role();
    case ConceptKind::And:
    case ConceptKind::Or:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    default:
      return a.operand() == b.operand();
  }
}

bool is_unary_kind(ConceptKind kind) {
  switch (kind) {
    case ConceptKind::Not:
    case ConceptKind::NextF:
    case ConceptKind::NextP:
    case ConceptKind::SomeF:
    case ConceptKind::SomeP:
    case ConceptKind::AlwF:
    case ConceptKind::AlwP:
      return true;
    default:
      return false;
  }
}

bool is_binary_kind(ConceptKind kind) { return kind == ConceptKind::And || kind == ConceptKind::Or; }

Concept normalize(const Concept& c) {
  using K = ConceptKind;
  switch (c.kind()) {
    case K::Bottom:
    case K::Atomic:
    case K::AtLeast:
      return c;
    case K::Top:
      return Concept::negation(Concept::bottom());
    case K::And: {
      Concept l = normalize(c.lhs());
      Concept r = normalize(c.rhs());
      if (l == c.lhs() && r == c.rhs()) return c;
      return Concept::conj(std::move(l), std::move(r));
    }
    case K::Or:
      return Concept::negation(Concept::conj(Concept::negation(normalize(c.lhs())),
                                             Concept::negation(normalize(c.rhs()))));
    case K::AlwF:
      return Concept::negation(Concept::unary(K::SomeF, Concept::negation(normalize(c.operand()))));
    case K::AlwP:
      return Concept::negation(Concept::unary(K::SomeP, Concept::negation(normalize(c.operand()))));
    default: {
      Concept o = normalize(c.operand());
      if (o == c.operand()) return c;
      return Concept::unary(c.kind(), std::move(o));
    }
  }
}

bool is_normalized(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Top:
    case ConceptKind::Or:
    case ConceptKind::AlwF:
    case ConceptKind::AlwP:
      return false;
    case ConceptKind::Bottom:
    case ConceptKind::Atomic:
    case ConceptKind::AtLeast:
      return true;
    case ConceptKind::And:
      return is_normalized(c.lhs()) && is_normalized(c.rhs());
    default:
      return is_normalized(c.operand());
  }
}

bool Signature::is_role(const std::string& name) const {
  return global_roles.contains(name) || local_roles.contains(name);
}

std::vector<std::string> Signature::roles() const {
  std::vector<std::string> out(global_roles.begin(), global_roles.end());
  out.insert(out.end(), local_roles.begin(), local_roles.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool operator==(const Signature& a, const Signature& b) {
  return a.concept_names == b.concept_names && a.global_roles == b.global_roles &&
         a.local_roles == b.local_roles && a.individuals == b.individuals;
}

std::vector<std::string> abox_individuals(const KnowledgeBase& kb) {
  std::set<std::string> names;
  for (const auto& assertion : kb.abox) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&assertion)) {
      names.insert(ca->individual);
    } else {
      const auto& ra = std::get<RoleAssertion>(assertion);
      names.insert(ra.subject);
      names.insert(ra.object);
    }
  }
  return {names.begin(), names.end()};
}

KnowledgeBase normalize(const KnowledgeBase& kb) {
  KnowledgeBase out = kb;
  for (auto& ci : out.tbox) {
    ci.lhs = normalize(ci.lhs);
    ci.rhs = normalize(ci.rhs);
  }
  return out;
}

bool is_reserved_word(std::string_view word) {
  static constexpr std::string_view kWords[] = {"SIG", "TBOX", "ABOX", "SUB",  "NOT",  "AND", "OR", "X",
                                                "Y",   "SOMF", "SOMP", "ALWF", "ALWP", "TOP", "BOT"};
  return std::find(std::begin(kWords), std::end(kWords), word) != std::end(kWords);
}

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])) || is_reserved_word(s)) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

SourceLocation decl_loc(const Signature& sig, const std::string& name) {
  auto it = sig.locations.find(name);
  return it == sig.locations.end() ? SourceLocation{} : it->second;
}

class Validator {
 public:
  explicit Validator(const KnowledgeBase& kb) : kb_(kb) {}

  std::vector<Diagnostic> run() {
    check_signature();
    for (const auto& ci : kb_.tbox) {
      check_concept(ci.lhs, ci.loc);
      check_concept(ci.rhs, ci.loc);
    }
    for (const auto& assertion : kb_.abox) {
      std::visit([this](const auto& a) { check_assertion(a); }, assertion);
    }
    check_duplicates();
    return std::move(out_);
  }

 private:
  void report(std::string code, std::string message, SourceLocation loc) {
    out_.push_back(Diagnostic{std::move(code), std::move(message), loc});
  }

  void check_signature() {
    const Signature& sig = kb_.signature;
    auto check_ids = [&](const std::set<std::string>& names) {
      for (const auto& n : names) {
        if (!is_identifier(n)) report("BAD_IDENTIFIER", "invalid identifier '" + n + "'", decl_loc(sig, n));
      }
    };
    check_ids(sig.concept_names);
    check_ids(sig.global_roles);
    check_ids(sig.local_roles);
    check_ids(sig.individuals);
    for (const auto& r : sig.global_roles) {
      if (sig.local_roles.contains(r)) {
        report("ROLE_KIND_CONFLICT", "role '" + r + "' declared both global and local", decl_loc(sig, r));
      }
    }
  }

  void check_concept(const Concept& c, SourceLocation loc) {
    switch (c.kind()) {
      case ConceptKind::Atomic:
        if (!kb_.signature.concept_names.contains(c.name())) {
          report("UNDECLARED_NAME", "undeclared concept name '" + c.name() + "'", loc);
        }
        break;
      case ConceptKind::AtLeast:
        if (c.cardinality() == 0) report("CARD_ZERO", "cardinality must be positive in '>= 0 " + c.role().str() + "'", loc);
        if (!kb_.signature.is_role(c.role().name)) {
          report("UNDECLARED_NAME", "undeclared role name '" + c.role().name + "'", loc);
        }
        break;
      case ConceptKind::Bottom:
      case ConceptKind::Top:
        break;
      default:
        if (c.is_binary()) {
          check_concept(c.lhs(), loc);
          check_concept(c.rhs(), loc);
        } else {
          check_concept(c.operand(), loc);
        }
    }
  }

  void check_individual(const std::string& name, SourceLocation loc) {
    if (!kb_.signature.individuals.contains(name)) {
      report("UNDECLARED_NAME", "undeclared individual '" + name + "'", loc);
    }
  }

  void check_assertion(const ConceptAssertion& a) {
    if (!kb_.signature.concept_names.contains(a.concept_name)) {
      report("UNDECLARED_NAME", "undeclared concept name '" + a.concept_name + "'", a.loc);
    }
    check_individual(a.individual, a.loc);
  }

  void check_assertion(const RoleAssertion& a) {
    if (!kb_.signature.is_role(a.role_name)) {
      report("UNDECLARED_NAME", "undeclared role name '" + a.role_name + "'", a.loc);
    }
    check_individual(a.subject, a.loc);
    check_individual(a.object, a.loc);
  }

  void check_duplicates() {
    struct CiHash {
      std::size_t operator()(const ConceptInclusion& ci) const { return detail::hash_mix(ci.lhs.hash(), ci.rhs.hash()); }
    };
    std::unordered_set<ConceptInclusion, CiHash> seen;
    for (const auto& ci : kb_.tbox) {
      ConceptInclusion n{normalize(ci.lhs), normalize(ci.rhs), ci.loc};
      if (!seen.insert(n).second) report("DUPLICATE_AXIOM", "duplicate concept inclusion", ci.loc);
    }
    using Key = std::tuple<bool, bool, std::string, std::string, std::string, std::int64_t>;
    std::set<Key> prior;
    for (const auto& a : kb_.abox) {
      Key key;
      SourceLocation loc;
      if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
        key = Key{false, ca->positive, ca->concept_name, ca->individual, "", ca->time};
        loc = ca->loc;
      } else {
        const auto& ra = std::get<RoleAssertion>(a);
        key = Key{true, ra.positive, ra.role_name, ra.subject, ra.object, ra.time};
        loc = ra.loc;
      }
      if (!prior.insert(std::move(key)).second) report("DUPLICATE_AXIOM", "duplicate assertion", loc);
    }
  }

  const KnowledgeBase& kb_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const KnowledgeBase& kb) { return Validator(kb).run(); }

std::vector<RoleFact> role_facts(const KnowledgeBase& kb) {
  std::vector<RoleFact> out;
  for (const auto& a : kb.abox) {
    if (const auto* ra = std::get_if<RoleAssertion>(&a)) {
      out.push_back(RoleFact{Role{ra->role_name, false}, ra->subject, ra->object, ra->time, ra->positive});
    }
  }
  return out;
}

std::vector<RoleFact> close_under_inverses(std::span<const RoleFact> facts) {
  std::vector<RoleFact> out(facts.begin(), facts.end());
  std::set<RoleFact> present(facts.begin(), facts.end());
  for (const auto& f : facts) {
    if (!f.positive) continue;
    RoleFact inv{f.role.inverse(), f.object, f.subject, f.time, true};
    if (present.insert(inv).second) out.push_back(std::move(inv));
  }
  return out;
}

}  // namespace tdl
