#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdlite/kb.hpp"
#include "tdlite/ltl.hpp"
#include "tdlite/qtl.hpp"

namespace tdl {

struct StageStats {
  std::string name;  // "qtl1", "ground", "depast"
  double ms = 0;
  std::uint64_t nodes = 0;
  std::size_t props = 0;
};

/// All artifacts of KB -> QTL1 -> grounded LTL (with past over Z) ->
/// past-free LTL. The N flow grounds straight to a past-free formula and
/// has no depast stage.
struct PipelineResult {
  Flow flow = Flow::Z;
  QtlTranslation qtl;
  Ltl grounded = Ltl::truth();
  std::optional<Ltl> depasted;
  std::vector<StageStats> stages;

  /// The past-free formula handed to solvers.
  const Ltl& final_formula() const { return depasted ? *depasted : grounded; }
  double total_ms() const;
};

PipelineResult run_pipeline(const KnowledgeBase& kb, Flow flow);

}  // namespace tdl
