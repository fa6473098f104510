#include <benchmark/benchmark.h>

#include "tdlite/depast.hpp"
#include "tdlite/parser.hpp"
#include "tdlite/pipeline.hpp"
#include "tdlite/randgen.hpp"

namespace {

tdl::KnowledgeBase random_kb(std::size_t lt, std::size_t abox) {
  tdl::BatchSpec spec;
  spec.N = 7;
  spec.Lt = lt;
  spec.Lc = 20;
  spec.Q = 5;
  spec.abox_size = abox;
  return tdl::random_instance(spec, 0);
}

void BM_ParseKb(benchmark::State& state) {
  std::string text = tdl::print_kb(random_kb(static_cast<std::size_t>(state.range(0)), 20));
  for (auto _ : state) benchmark::DoNotOptimize(tdl::parse_kb(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseKb)->RangeMultiplier(4)->Range(4, 256);

void BM_Qtl(benchmark::State& state) {
  auto kb = random_kb(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(tdl::translate(kb, tdl::Flow::Z));
}
BENCHMARK(BM_Qtl)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMicrosecond);

void BM_Pipeline(benchmark::State& state) {
  auto kb = random_kb(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    auto r = tdl::run_pipeline(kb, tdl::Flow::Z);
    nodes = r.final_formula().size();
  }
  state.counters["out_nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Pipeline)->Args({25, 0})->Args({100, 0})->Args({100, 20})->Unit(benchmark::kMillisecond);

// Chain of alternating past operators, so every subformula is temporal.
void BM_Depast(benchmark::State& state) {
  tdl::Ltl f = tdl::Ltl::prop("a");
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    f = tdl::Ltl::conj(i % 2 ? tdl::Ltl::some_p(f) : tdl::Ltl::next_p(f), tdl::Ltl::prop("b" + std::to_string(i % 8)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(tdl::depast(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Depast)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oN);

}  // namespace
