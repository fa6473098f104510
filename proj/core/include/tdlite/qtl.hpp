#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tdlite/kb.hpp"

namespace tdl {

enum class Flow : std::uint8_t { Z, N };

const char* flow_name(Flow flow);

/// Either a concept name A or a cardinality predicate E_q R.
struct Predicate {
  bool cardinality = false;
  std::string concept_name;
  std::uint32_t q = 0;
  Role role;

  static Predicate atomic(std::string name) { return Predicate{false, std::move(name), 0, {}}; }
  static Predicate at_least(std::uint32_t q, Role role) { return Predicate{true, {}, q, std::move(role)}; }

  auto operator<=>(const Predicate&) const = default;
};

/// The free variable x, an ABox individual, or the witness constant d_R.
struct Term {
  enum class Kind : std::uint8_t { Var, Individual, Witness };
  Kind kind = Kind::Var;
  std::string individual;
  Role role;

  static Term var() { return Term{}; }
  static Term constant(std::string name) { return Term{Kind::Individual, std::move(name), {}}; }
  static Term witness(Role r) { return Term{Kind::Witness, {}, std::move(r)}; }

  auto operator<=>(const Term&) const = default;
};

enum class QtlOp : std::uint8_t {
  Falsum,
  UnaryAtom,
  PropAtom,
  Not,
  And,
  NextF,
  NextP,
  SomeF,
  SomeP,
  AlwF,
  AlwP,
  ForAll,
};

/// First-order temporal formula with at most one variable x. The only
/// propositional atoms are the role propositions p_R.
class Qtl {
 public:
  static Qtl falsum();
  static Qtl truth() { return negation(falsum()); }
  static Qtl atom(Predicate pred, Term term);
  static Qtl role_prop(Role role);
  static Qtl negation(Qtl f) { return unary(QtlOp::Not, std::move(f)); }
  static Qtl conj(Qtl a, Qtl b);
  static Qtl unary(QtlOp op, Qtl f);
  static Qtl for_all(Qtl body) { return unary(QtlOp::ForAll, std::move(body)); }

  QtlOp op() const;
  const Predicate& predicate() const;
  const Term& term() const;
  /// Role of a PropAtom.
  const Role& role() const;
  const Qtl& operand() const;
  const Qtl& lhs() const;
  const Qtl& rhs() const;
  std::size_t size() const;

  friend bool operator==(const Qtl& a, const Qtl& b);

 private:
  struct Node;
  explicit Qtl(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace qtl {
Qtl implies(Qtl a, Qtl b);
/// Right-nested; empty yields truth.
Qtl conj_all(std::span<const Qtl> parts);
}  // namespace qtl

struct TranslationContext {
  Flow flow = Flow::Z;
  /// Each declared role followed by its inverse, roles sorted by name.
  std::vector<Role> roles;
  /// Ascending; always contains 1.
  std::vector<std::uint32_t> q_set;
  std::set<std::string> global_roles;

  bool is_global(const Role& r) const { return global_roles.contains(r.name); }
};

struct SuccessorCount {
  Role role;
  std::string individual;
  std::int64_t time = 0;
  std::uint32_t count = 1;

  auto operator<=>(const SuccessorCount&) const = default;
};

/// A_n^R over a fact list closed under inverses: every positive R-fact for a
/// global R, only those at time n for a local one.
std::set<std::pair<std::string, std::string>> abox_pairs(std::span<const RoleFact> closed, const Role& role,
                                                         bool global, std::int64_t n);

/// One entry per distinct (role, subject, time) among the positive facts of
/// the inverse-closed ABox, in fact order.
std::vector<SuccessorCount> successor_counts(const KnowledgeBase& kb);

/// Also checks the flow restrictions: in the N flow, timestamps must be
/// non-negative (NEGATIVE_TIMESTAMP_IN_N_FLOW) and the TBox must not use
/// past operators (PAST_OPERATOR_IN_N_FLOW).
TranslationContext build_context(const KnowledgeBase& kb, Flow flow);

/// Homomorphic image of a normalized concept at term t.
Qtl concept_star(const Concept& c, const Term& t = Term::var());

struct TBoxTranslation {
  std::vector<Qtl> inclusions;    // one per CI
  std::vector<Qtl> monotonicity;  // E_q'R -> E_qR for q < q'
  std::vector<Qtl> rigidity;      // global roles
  std::vector<Qtl> existence;     // p_R / d_R axioms
};

TBoxTranslation translate_tbox(const KnowledgeBase& kb, const TranslationContext& ctx);
std::vector<Qtl> translate_abox(const KnowledgeBase& kb, const TranslationContext& ctx);

struct QtlTranslation {
  TranslationContext ctx;
  TBoxTranslation tbox;
  std::vector<Qtl> abox;

  /// TBox conjuncts in equation order, then the ABox conjuncts.
  std::vector<Qtl> conjuncts() const;
  Qtl formula() const { auto c = conjuncts(); return qtl::conj_all(c); }
  std::size_t size() const;
};

/// Normalizes the KB, builds the context and translates both parts.
QtlTranslation translate(const KnowledgeBase& kb, Flow flow);

std::string print_qtl(const Qtl& f);
/// One top-level conjunct per line; "TOP" for the empty conjunction.
std::string dump(const QtlTranslation& t);

}  // namespace tdl
