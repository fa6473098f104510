#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdlite/ltl.hpp"

namespace tdl {

using Valuation = std::vector<bool>;

/// Ultimately periodic word over N: prefix then loop repeated forever.
struct LassoWord {
  std::vector<std::string> alphabet;
  std::vector<Valuation> prefix;
  std::vector<Valuation> loop;

  std::size_t length() const { return prefix.size() + loop.size(); }
  /// Valuation at position n >= 0.
  const Valuation& at(std::int64_t n) const;
};

/// Word over Z, periodic in both directions. Position 0 is the first letter
/// of right_prefix (or of right_loop when right_prefix is empty); left_prefix
/// covers -|left_prefix|..-1 and left_loop repeats before it, its last letter
/// sitting just left of left_prefix.
struct BiLassoWord {
  std::vector<std::string> alphabet;
  std::vector<Valuation> left_loop;
  std::vector<Valuation> left_prefix;
  std::vector<Valuation> right_prefix;
  std::vector<Valuation> right_loop;

  const Valuation& at(std::int64_t n) const;
};

/// Truth value at `pos` on a word over N; past operators see only
/// positions >= 0. Propositions missing from the alphabet are false.
bool eval(const Ltl& f, const LassoWord& w, std::int64_t pos = 0);
/// Truth value at `pos` on a word over Z.
bool eval(const Ltl& f, const BiLassoWord& w, std::int64_t pos = 0);

struct LtlSatOptions {
  /// Elementary variables (propositions plus one per X and per F
  /// subformula) above which FORMULA_TOO_LARGE is raised.
  std::size_t max_elementary = 6000;
  std::size_t max_nodes = 24u << 20;
  /// Polled during BDD construction; returning true gives RESOURCE_LIMIT.
  std::function<bool()> should_stop;
  bool extract_model = true;
};

enum class SatVerdict : std::uint8_t { Sat, Unsat };

struct LtlSatStats {
  std::size_t elementary = 0;
  std::size_t fixpoint_iterations = 0;
  std::size_t peak_nodes = 0;
};

struct LtlSatResult {
  SatVerdict verdict = SatVerdict::Unsat;
  std::optional<LassoWord> model;
  LtlSatStats stats;
};

/// Complete satisfiability check for past-free formulas over N, by a
/// symbolic tableau (BDD-encoded closure states, fairness for F
/// eventualities). Models are re-checked with `eval`.
/// Errors: PAST_OPERATOR_PRESENT, FORMULA_TOO_LARGE, RESOURCE_LIMIT.
LtlSatResult ltl_sat(const Ltl& f, const LtlSatOptions& options = {});

struct ZSearchBounds {
  std::size_t max_prefix = 3;
  std::size_t max_loop = 3;
  std::size_t max_props = 8;
  /// Upper bound on the number of candidate words tried.
  std::uint64_t max_words = 1u << 18;
};

/// One-sided search for a bi-lasso model over Z, shortest shapes first.
/// A result is a verified model; nullopt means nothing was found.
std::optional<BiLassoWord> z_sat_bounded(const Ltl& f, const ZSearchBounds& bounds = {});

/// Reads a Z word back from a model of the past-free translation: A at
/// n >= 0 from A__pos at n, A at n < 0 from A__neg at -n.
BiLassoWord reconstruct_z_word(const LassoWord& model, const std::vector<std::string>& props);

}  // namespace tdl
