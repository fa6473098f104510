#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "tdlite/kb.hpp"
#include "tdlite/qtl.hpp"

namespace tdl {

/// Parameters of a batch of random knowledge bases. Concept names are
/// A1..AN, role names R1..RN.
struct BatchSpec {
  std::size_t F = 1;   // KBs per batch
  std::size_t N = 1;   // concept names = role names
  std::size_t Lt = 1;  // CIs per TBox
  std::size_t Lc = 1;  // length of each CI side
  std::uint32_t Q = 1;
  /// Set: temporal-behaviour mode, the four diamond/box operators share
  /// this probability. Unset: operators are uniform.
  std::optional<double> Pt;
  double Pg = 0.5;
  std::size_t abox_size = 0;
  std::uint64_t seed = 1;
  /// The N flow draws only future operators and timestamps >= 0.
  Flow flow = Flow::Z;
  bool allow_bottom = false;
  /// Timestamp window for ABox assertions; the flow default when unset.
  std::optional<std::int64_t> time_lo;
  std::optional<std::int64_t> time_hi;

  std::int64_t window_lo() const { return time_lo.value_or(flow == Flow::Z ? -3 : 0); }
  std::int64_t window_hi() const { return time_hi.value_or(flow == Flow::Z ? 3 : 6); }
};

using Rng = std::mt19937_64;

/// Throws INVALID_SPEC when a field is out of range.
void check_spec(const BatchSpec& spec);

/// Concept with exactly `len` nodes, drawn per the spec's mode.
Concept random_concept(std::size_t len, const BatchSpec& spec, Rng& rng);

/// Exactly Lt CIs with both sides of length Lc; each role global with
/// probability Pg.
KnowledgeBase random_tbox(const BatchSpec& spec, Rng& rng);

/// Adds `size` distinct assertions over the individuals a1..ak,
/// k = ceil(sqrt(size)) + 1.
KnowledgeBase random_abox(const KnowledgeBase& kb, std::size_t size, const BatchSpec& spec, Rng& rng);

std::uint64_t instance_seed(std::uint64_t batch_seed, std::size_t index);

/// Instance `index` of the batch: TBox, then an ABox when abox_size > 0.
KnowledgeBase random_instance(const BatchSpec& spec, std::size_t index);

}  // namespace tdl
