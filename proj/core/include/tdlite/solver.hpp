#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdlite/ltl.hpp"

namespace tdl {

enum class Verdict : std::uint8_t { Sat, Unsat, Timeout, Fail, Skipped };

std::string_view verdict_name(Verdict v);
bool is_definite(Verdict v);

enum class InputFormat : std::uint8_t { Smv, Infix };

/// How to run one solver. `command` is a shell command line in which
/// {input} and {timeout} are substituted. The patterns are ECMAScript
/// regexes searched in the combined output (^ and $ match at
/// line boundaries); they describe satisfiability
/// of the formula itself, so an SMV profile maps "specification is false"
/// to `sat_pattern`.
struct SolverProfile {
  std::string name;
  std::string command;
  InputFormat format = InputFormat::Infix;
  std::string sat_pattern;
  std::string unsat_pattern;
  double cpu_seconds = 600;
  std::uint64_t memory_bytes = std::uint64_t{1} << 30;
  std::optional<std::size_t> max_props;
  /// The in-process oracle; command and patterns are unused.
  bool builtin = false;
};

struct RunResult {
  Verdict verdict = Verdict::Fail;
  double wall_ms = 0;
  double cpu_ms = 0;
  std::uint64_t max_memory_bytes = 0;
  std::string output_digest;
  /// Short human-readable reason for FAIL/TIMEOUT/SKIPPED.
  std::string detail;
};

struct RunOptions {
  /// Overrides of the profile limits.
  std::optional<double> cpu_seconds;
  std::optional<std::uint64_t> memory_bytes;
  bool keep_artifacts = false;
  /// Where per-run directories go; the system temp dir when empty.
  std::string artifact_root;
};

/// Fully parenthesized `~ & X F false` syntax, one line.
/// Errors: PAST_OPERATOR_PRESENT.
std::string emit_infix(const Ltl& f);
/// Parser for the emit_infix format (and a few derived connectives).
Ltl parse_infix(std::string_view text);

/// SMV module with one free boolean per proposition and `LTLSPEC !(f)`;
/// f is satisfiable iff the specification fails.
/// Errors: PAST_OPERATOR_PRESENT.
std::string emit_smv(const Ltl& f);

SolverProfile oracle_profile();

/// Reads `{"profiles": [...]}`; see profiles/ for the field names.
/// Errors: PROFILE_ERROR.
std::vector<SolverProfile> load_profiles(const std::string& path);
std::vector<SolverProfile> parse_profiles(std::string_view json_text);

/// Never throws: every failure is reported as a verdict.
RunResult run_solver(const SolverProfile& profile, const Ltl& f, const RunOptions& options = {});

}  // namespace tdl
