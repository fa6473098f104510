#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tdl {

enum class LtlOp : std::uint8_t { False, Prop, Not, And, NextF, NextP, SomeF, SomeP };

/// Immutable propositional temporal formula, with or without past
/// operators. Box operators and the other connectives are built from
/// these eight constructors by the helpers below.
class Ltl {
 public:
  static Ltl falsum();
  static Ltl truth() { return negation(falsum()); }
  static Ltl prop(std::string name);
  static Ltl negation(Ltl f);
  static Ltl conj(Ltl a, Ltl b);
  static Ltl unary(LtlOp op, Ltl f);
  static Ltl next_f(Ltl f) { return unary(LtlOp::NextF, std::move(f)); }
  static Ltl next_p(Ltl f) { return unary(LtlOp::NextP, std::move(f)); }
  static Ltl some_f(Ltl f) { return unary(LtlOp::SomeF, std::move(f)); }
  static Ltl some_p(Ltl f) { return unary(LtlOp::SomeP, std::move(f)); }

  LtlOp op() const;
  const std::string& name() const;
  const Ltl& operand() const;
  const Ltl& lhs() const;
  const Ltl& rhs() const;

  /// Tree node count (shared subtrees counted once per occurrence).
  std::uint64_t size() const;
  std::size_t hash() const;
  bool has_past() const;
  /// Stable identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

  bool is_temporal() const;

  friend bool operator==(const Ltl& a, const Ltl& b);

 private:
  struct Node;
  explicit Ltl(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct LtlHash {
  std::size_t operator()(const Ltl& f) const { return f.hash(); }
};

namespace ltl {

Ltl disj(Ltl a, Ltl b);
Ltl implies(Ltl a, Ltl b);
Ltl iff(Ltl a, Ltl b);
/// G f as NOT F NOT f.
Ltl always_f(Ltl f);
/// H f as NOT O NOT f.
Ltl always_p(Ltl f);
/// Right-nested conjunction; the empty list yields truth.
Ltl conj_all(std::span<const Ltl> parts);
/// Balanced conjunction tree, for very long lists.
Ltl conj_balanced(std::span<const Ltl> parts);
/// Top-level conjuncts of a (possibly nested) conjunction.
std::vector<Ltl> flatten_conj(const Ltl& f);

/// Distinct proposition names, sorted.
std::set<std::string> props(const Ltl& f);

/// Distinct subformulas in post-order of first occurrence.
std::vector<Ltl> subformulas(const Ltl& f);

}  // namespace ltl

/// Number of distinct proposition names in `f`.
std::size_t count_props(const Ltl& f);

}  // namespace tdl
