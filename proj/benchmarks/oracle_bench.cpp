#include <benchmark/benchmark.h>

#include "tdlite/oracle.hpp"
#include "tdlite/parser.hpp"

namespace {

// n-bit counter that has to reach all ones; 2^n steps deep.
tdl::Ltl counter(int bits) {
  std::string init, step, all;
  for (int i = 0; i < bits; ++i) {
    std::string b = "b" + std::to_string(i);
    std::string carry = "true";
    for (int j = 0; j < i; ++j) carry += " & b" + std::to_string(j);
    init += (i ? " & ~" : "~") + b;
    step += " & G ((X " + b + ") <-> ~(" + b + " <-> (" + carry + ")))";
    all += (i ? " & " : "") + b;
  }
  return tdl::parse_ltl(init + step + " & F (" + all + ")");
}

void BM_LtlSatCounter(benchmark::State& state) {
  tdl::Ltl f = counter(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tdl::ltl_sat(f));
}
BENCHMARK(BM_LtlSatCounter)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

// GF p_i for every i against FG ~p_0: one fairness set per conjunct.
void BM_LtlSatFairness(benchmark::State& state) {
  std::string text = "F G ~p0";
  for (std::int64_t i = 0; i < state.range(0); ++i) text += " & G F p" + std::to_string(i);
  tdl::Ltl f = tdl::parse_ltl(text);
  for (auto _ : state) benchmark::DoNotOptimize(tdl::ltl_sat(f));
}
BENCHMARK(BM_LtlSatFairness)->RangeMultiplier(2)->Range(2, 32)->Unit(benchmark::kMillisecond);

void BM_EvalLasso(benchmark::State& state) {
  tdl::Ltl f = tdl::parse_ltl("G (a -> F b) & G F a & X X (b | ~a)");
  tdl::LassoWord w;
  w.alphabet = {"a", "b"};
  for (std::int64_t i = 0; i < state.range(0); ++i) w.prefix.push_back({i % 3 == 0, i % 5 == 0});
  w.loop = {{true, false}, {false, true}};
  for (auto _ : state) benchmark::DoNotOptimize(tdl::eval(f, w, 0));
}
BENCHMARK(BM_EvalLasso)->RangeMultiplier(8)->Range(8, 4096);

}  // namespace

BENCHMARK_MAIN();
