#include "tdlite/pipeline.hpp"

#include <chrono>

#include "tdlite/depast.hpp"
#include "tdlite/ground.hpp"

namespace tdl {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double PipelineResult::total_ms() const {
  double t = 0;
  for (const auto& s : stages) t += s.ms;
  return t;
}

PipelineResult run_pipeline(const KnowledgeBase& kb, Flow flow) {
  PipelineResult r;
  r.flow = flow;
  auto t0 = std::chrono::steady_clock::now();
  r.qtl = translate(kb, flow);
  r.stages.push_back(StageStats{"qtl1", ms_since(t0), r.qtl.size(), 0});

  t0 = std::chrono::steady_clock::now();
  GroundingContext gctx(normalize(kb), r.qtl.ctx);
  r.grounded = ground(r.qtl, gctx);
  r.stages.push_back(StageStats{"ground", ms_since(t0), r.grounded.size(), count_props(r.grounded)});

  if (flow == Flow::Z) {
    t0 = std::chrono::steady_clock::now();
    r.depasted = depast(r.grounded);
    r.stages.push_back(StageStats{"depast", ms_since(t0), r.depasted->size(), count_props(*r.depasted)});
  }
  return r;
}

}  // namespace tdl
