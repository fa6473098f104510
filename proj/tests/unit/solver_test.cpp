#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "instances.hpp"
#include "tdlite/parser.hpp"
#include "tdlite/solver.hpp"

using namespace tdl;

namespace {

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

SolverProfile self_profile() {
  std::string json = R"({"profiles":[{"name":"self","command":")" + std::string(TDLITE_CLI) +
                     R"( ltl-sat {input}","format":"infix","sat_pattern":"^SAT","unsat_pattern":"^UNSAT"}]})";
  return parse_profiles(json).at(0);
}

}  // namespace

TEST(Infix, EmitsFullyParenthesized) {
  EXPECT_EQ(emit_infix(parse_infix("a & ~b")), "(a & (~ b))");
  EXPECT_EQ(emit_infix(parse_infix("F a")), "(F a)");
  EXPECT_EQ(emit_infix(Ltl::falsum()), "false");
  EXPECT_EQ(code_of([] { emit_infix(parse_infix("Y a")); }), "PAST_OPERATOR_PRESENT");
}

TEST(Infix, RoundTrips) {
  for (const char* s : {"a", "X (a & ~ F b)", "G F a -> F G b", "(a | b) & ~c"}) {
    Ltl f = parse_infix(s);
    EXPECT_EQ(parse_infix(emit_infix(f)), f) << s;
  }
}

TEST(Smv, DeclaresPropsAndNegatesSpec) {
  std::string smv = emit_smv(parse_infix("a"));
  EXPECT_EQ(smv, "MODULE main\nVAR\n  a : boolean;\nLTLSPEC !(a)\n");
  std::string none = emit_smv(Ltl::falsum());
  EXPECT_NE(none.find("boolean;"), std::string::npos);
  EXPECT_NE(none.find("LTLSPEC !(FALSE)"), std::string::npos);
  EXPECT_EQ(code_of([] { emit_smv(parse_infix("O a")); }), "PAST_OPERATOR_PRESENT");
}

TEST(Profiles, ParsesFieldsAndRejectsBadInput) {
  auto ps = parse_profiles(R"({"profiles":[{"name":"nx","command":"nuXmv {input}","format":"smv",
      "sat_pattern":"is false","unsat_pattern":"is true","cpu_seconds":5,"memory_bytes":1000,"max_props":7}]})");
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].format, InputFormat::Smv);
  EXPECT_EQ(ps[0].cpu_seconds, 5);
  EXPECT_EQ(ps[0].memory_bytes, 1000u);
  EXPECT_EQ(ps[0].max_props, 7u);
  EXPECT_FALSE(ps[0].builtin);
  EXPECT_EQ(code_of([] { parse_profiles("{"); }), "PROFILE_ERROR");
  EXPECT_EQ(code_of([] { parse_profiles(R"({"profiles":[{"name":"x"}]})"); }), "PROFILE_ERROR");
  EXPECT_EQ(code_of([] { parse_profiles(R"({"profiles":[{"name":"oracle","command":"c","sat_pattern":"s",
      "unsat_pattern":"u"}]})"); }),
            "PROFILE_ERROR");
  EXPECT_EQ(code_of([] { parse_profiles(R"({"profiles":[{"name":"x","command":"c","sat_pattern":"(",
      "unsat_pattern":"u"}]})"); }),
            "PROFILE_ERROR");
  EXPECT_EQ(code_of([] { load_profiles("/nonexistent/profiles.json"); }), "PROFILE_ERROR");
}

TEST(Oracle, DecidesAndMeasures) {
  auto r = run_solver(oracle_profile(), parse_infix("a & ~a"));
  EXPECT_EQ(r.verdict, Verdict::Unsat);
  EXPECT_GE(r.cpu_ms, 0);
  EXPECT_EQ(run_solver(oracle_profile(), parse_infix("G F a")).verdict, Verdict::Sat);
  EXPECT_EQ(run_solver(oracle_profile(), parse_infix("Y a")).verdict, Verdict::Fail);
}

TEST(Oracle, PropCapGivesSkipped) {
  Ltl f = Ltl::prop("p0");
  for (int i = 1; i < 1300; ++i) f = Ltl::conj(f, Ltl::prop("p" + std::to_string(i)));
  SolverProfile p = oracle_profile();
  p.max_props = 1200;
  auto r = run_solver(p, f);
  EXPECT_EQ(r.verdict, Verdict::Skipped);
  EXPECT_FALSE(r.detail.empty());
}

TEST(Oracle, CpuLimitGivesTimeout) {
  RunOptions o;
  o.cpu_seconds = 1;
  auto r = run_solver(oracle_profile(), instances::counter(22), o);
  EXPECT_EQ(r.verdict, Verdict::Timeout);
  EXPECT_LE(r.cpu_ms, 1500);
}

TEST(Subprocess, SelfProfileAgreesWithOracle) {
  SolverProfile p = self_profile();
  for (const char* s : {"a & ~a", "G F a & F G ~a", "F a", "G (a -> X ~a) & G F a"}) {
    Ltl f = parse_infix(s);
    auto ext = run_solver(p, f);
    EXPECT_EQ(ext.verdict, run_solver(oracle_profile(), f).verdict) << s << ": " << ext.detail;
    EXPECT_EQ(ext.output_digest.size(), 16u);
  }
}

TEST(Subprocess, ClassifiesFailures) {
  SolverProfile p = self_profile();
  p.command = "/nonexistent/solver {input}";
  EXPECT_EQ(run_solver(p, parse_infix("a")).verdict, Verdict::Fail);
  p.command = "echo SAT; echo UNSAT";
  EXPECT_EQ(run_solver(p, parse_infix("a")).verdict, Verdict::Fail);
  p.command = "echo nothing";
  EXPECT_EQ(run_solver(p, parse_infix("a")).verdict, Verdict::Fail);
  p.command = "kill -SEGV $$";
  EXPECT_EQ(run_solver(p, parse_infix("a")).verdict, Verdict::Fail);
}

TEST(Subprocess, CpuLimitGivesTimeout) {
  SolverProfile p = self_profile();
  p.command = "while :; do :; done";
  RunOptions o;
  o.cpu_seconds = 1;
  auto r = run_solver(p, parse_infix("a"), o);
  EXPECT_EQ(r.verdict, Verdict::Timeout);
  EXPECT_LE(r.cpu_ms, 1500);
  EXPECT_GE(r.cpu_ms, 500);
}

TEST(Subprocess, KeepsArtifactsOnRequest) {
  auto root = std::filesystem::temp_directory_path() / "tdlite-solver-test";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  RunOptions o;
  o.keep_artifacts = true;
  o.artifact_root = root.string();
  run_solver(self_profile(), parse_infix("a"), o);
  std::size_t dirs = 0;
  for (const auto& e : std::filesystem::directory_iterator(root)) dirs += e.is_directory();
  EXPECT_EQ(dirs, 1u);
  std::filesystem::remove_all(root);
}
