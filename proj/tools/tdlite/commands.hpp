#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlite/randgen.hpp"
#include "tdlite/solver.hpp"

namespace tdlcli {

// Exit codes shared by the subcommands.
inline constexpr int kExitSat = 0;
inline constexpr int kExitUnsat = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFlow = 3;
inline constexpr int kExitUndecided = 4;

struct Limits {
  std::optional<double> cpu_seconds;
  std::optional<std::uint64_t> memory_bytes;
  bool keep_artifacts = false;
  std::string artifact_dir;

  tdl::RunOptions run_options() const;
};

/// Built-in oracle plus the profiles from `file`, or from $TDLITE_SOLVERS
/// when `file` is empty.
std::vector<tdl::SolverProfile> solver_registry(const std::string& file);
const tdl::SolverProfile* find_profile(const std::vector<tdl::SolverProfile>& reg, const std::string& name);

struct BenchOptions {
  tdl::BatchSpec spec;
  std::vector<std::string> solvers{"oracle"};
  std::string solvers_file;
  std::string out;  // "-" for stdout
  std::size_t jobs = 1;
  Limits limits;
};

/// Column names of the bench CSV, in order.
const std::vector<std::string>& bench_columns();

int run_bench(const BenchOptions& options);

}  // namespace tdlcli
