#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "tdlite/ltl.hpp"

namespace tdl {

/// Plain propositions A become the pair A__pos / A__neg.
std::string pos_name(const std::string& prop);
std::string neg_name(const std::string& prop);

/// Distinct subformulas of a formula together with the surrogate names of
/// its temporal subformulas.
class SubformulaTable {
 public:
  explicit SubformulaTable(const Ltl& root);

  /// Post-order of first occurrence.
  const std::vector<Ltl>& subformulas() const { return subs_; }
  /// Input propositions, sorted.
  const std::vector<std::string>& props() const { return props_; }
  /// Indices (into subformulas()) of the temporal subformulas, ascending.
  const std::vector<std::size_t>& temporal() const { return temporal_; }
  /// "s" unless an input proposition would clash with the surrogates.
  const std::string& surrogate_prefix() const { return prefix_; }

  /// Surrogate base name of a temporal subformula (`s<k>`).
  std::string surrogate(const Ltl& xi) const;
  std::size_t index_of(const Ltl& xi) const;

  /// Temporal-operator-free image: props to their polarity variable,
  /// temporal subformulas to their polarity surrogate.
  Ltl bar(const Ltl& xi, bool plus) const;

 private:
  std::vector<Ltl> subs_;
  std::vector<std::string> props_;
  std::vector<std::size_t> temporal_;
  std::string prefix_;
  std::unordered_map<Ltl, std::size_t, LtlHash> index_;
  std::vector<Ltl> bar_pos_;
  std::vector<Ltl> bar_neg_;
};

/// Equisatisfiable past-free formula over N for a formula over Z that uses
/// only False, props, NOT, AND, X, Y, F, O. Throws UNSUPPORTED_NODE otherwise.
Ltl depast(const Ltl& f);

struct DepastResult {
  Ltl formula;
  SubformulaTable table;
};

/// Same, also returning the table used.
DepastResult depast_with_table(const Ltl& f);

}  // namespace tdl
