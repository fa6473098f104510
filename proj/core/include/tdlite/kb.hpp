#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tdlite/error.hpp"

namespace tdl {

/// A role name, possibly inverted (R or R-).
struct Role {
  std::string name;
  bool inverted = false;

  Role inverse() const { return Role{name, !inverted}; }
  /// "R" or "R-".
  std::string str() const;

  auto operator<=>(const Role&) const = default;
};

enum class ConceptKind : std::uint8_t {
  Bottom,
  Top,
  Atomic,
  AtLeast,
  Not,
  And,
  Or,
  NextF,
  NextP,
  SomeF,
  SomeP,
  AlwF,
  AlwP,
};

/// Immutable temporal DL-Lite concept. Copies share structure.
///
/// Top, Or, AlwF and AlwP are sugar; `normalize` removes them.
class Concept {
 public:
  static Concept bottom();
  static Concept top();
  static Concept atomic(std::string name);
  static Concept at_least(std::uint32_t q, Role role);
  static Concept exists(Role role) { return at_least(1, std::move(role)); }
  static Concept unary(ConceptKind kind, Concept operand);
  static Concept binary(ConceptKind kind, Concept lhs, Concept rhs);

  static Concept negation(Concept c) { return unary(ConceptKind::Not, std::move(c)); }
  static Concept conj(Concept a, Concept b) { return binary(ConceptKind::And, std::move(a), std::move(b)); }
  static Concept disj(Concept a, Concept b) { return binary(ConceptKind::Or, std::move(a), std::move(b)); }

  ConceptKind kind() const;
  const std::string& name() const;
  std::uint32_t cardinality() const;
  const Role& role() const;
  const Concept& operand() const;
  const Concept& lhs() const;
  const Concept& rhs() const;

  /// Number of AST nodes; a basic concept counts as one node.
  std::size_t size() const;
  std::size_t hash() const;

  bool is_basic() const;
  bool is_unary() const;
  bool is_binary() const;

  friend bool operator==(const Concept& a, const Concept& b);

 private:
  struct Node;
  explicit Concept(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool is_unary_kind(ConceptKind kind);
bool is_binary_kind(ConceptKind kind);

/// Rewrites the sugar nodes: TOP => NOT BOT, C OR D => NOT (NOT C AND NOT D),
/// ALWF C => NOT SOMF NOT C, ALWP C => NOT SOMP NOT C. Idempotent.
Concept normalize(const Concept& c);

/// True if `c` contains no Top/Or/AlwF/AlwP node.
bool is_normalized(const Concept& c);

struct Signature {
  std::set<std::string> concept_names;
  std::set<std::string> global_roles;
  std::set<std::string> local_roles;
  std::set<std::string> individuals;
  /// Declaration sites recorded by the parser; not part of equality.
  std::map<std::string, SourceLocation> locations;

  bool is_role(const std::string& name) const;
  bool is_global(const std::string& name) const { return global_roles.contains(name); }
  /// All role names, sorted.
  std::vector<std::string> roles() const;

  friend bool operator==(const Signature& a, const Signature& b);
};

struct ConceptInclusion {
  Concept lhs;
  Concept rhs;
  SourceLocation loc;

  friend bool operator==(const ConceptInclusion& a, const ConceptInclusion& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

struct ConceptAssertion {
  bool positive = true;
  std::string concept_name;
  std::string individual;
  std::int64_t time = 0;
  SourceLocation loc;

  friend bool operator==(const ConceptAssertion& a, const ConceptAssertion& b) {
    return a.positive == b.positive && a.concept_name == b.concept_name &&
           a.individual == b.individual && a.time == b.time;
  }
};

/// User-facing role assertions always name a non-inverted role.
struct RoleAssertion {
  bool positive = true;
  std::string role_name;
  std::string subject;
  std::string object;
  std::int64_t time = 0;
  SourceLocation loc;

  friend bool operator==(const RoleAssertion& a, const RoleAssertion& b) {
    return a.positive == b.positive && a.role_name == b.role_name && a.subject == b.subject &&
           a.object == b.object && a.time == b.time;
  }
};

using Assertion = std::variant<ConceptAssertion, RoleAssertion>;

struct KnowledgeBase {
  Signature signature;
  std::vector<ConceptInclusion> tbox;
  std::vector<Assertion> abox;

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) = default;
};

/// Individuals that occur in the ABox, sorted.
std::vector<std::string> abox_individuals(const KnowledgeBase& kb);

/// KB with every CI normalized.
KnowledgeBase normalize(const KnowledgeBase& kb);

struct Diagnostic {
  std::string code;
  std::string message;
  SourceLocation loc;
};

/// Keywords of the KB concrete syntax; they cannot be used as names.
bool is_reserved_word(std::string_view word);

/// Checks the well-formedness invariants. Codes: BAD_IDENTIFIER,
/// ROLE_KIND_CONFLICT, UNDECLARED_NAME, CARD_ZERO, DUPLICATE_AXIOM.
std::vector<Diagnostic> validate(const KnowledgeBase& kb);

/// Internal role fact; unlike RoleAssertion the role may be inverted.
struct RoleFact {
  Role role;
  std::string subject;
  std::string object;
  std::int64_t time = 0;
  bool positive = true;

  auto operator<=>(const RoleFact&) const = default;
};

std::vector<RoleFact> role_facts(const KnowledgeBase& kb);

/// Adds R-(b,a)@n for every positive R(a,b)@n. Keeps input order and
/// appends the missing inverses; idempotent.
std::vector<RoleFact> close_under_inverses(std::span<const RoleFact> facts);

}  // namespace tdl
