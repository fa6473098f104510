#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  std::string cmd = std::string(TDLITE_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, n);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string data(const std::string& name) { return std::string(TDLITE_TEST_DATA) + "/" + name; }

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "tdlite-cli-XXXXXX").string();
    path_ = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run("check " + data("example1.kb")).code, 1);
  EXPECT_EQ(run("check --flow n " + data("example1.kb")).code, 1);
  TempDir t;
  write(t / "ok.kb", "SIG concept A individual a ABOX A(a)@0\n");
  EXPECT_EQ(run("check " + (t / "ok.kb").string()).code, 0);
  write(t / "bad.kb", "SIG concept A TBOX A SUB\n");
  EXPECT_EQ(run("check " + (t / "bad.kb").string()).code, 2);
  write(t / "neg.kb", "SIG concept A individual a ABOX A(a)@-2\n");
  EXPECT_EQ(run("check --flow n " + (t / "neg.kb").string()).code, 3);
  EXPECT_EQ(run("check --solver nosuch " + (t / "ok.kb").string()).code, 2);
}

TEST(Cli, UndecidedRunExitsFour) {
  TempDir t;
  write(t / "a.kb", "SIG concept A individual a TBOX A SUB X A ABOX A(a)@0\n");
  write(t / "p.json", R"({"profiles":[{"name":"spin","command":"while :; do :; done","format":"infix",
      "sat_pattern":"^SAT","unsat_pattern":"^UNSAT","cpu_seconds":1}]})");
  auto o = run("check --solver spin --solvers-file " + (t / "p.json").string() + " " + (t / "a.kb").string());
  EXPECT_EQ(o.code, 4);
  EXPECT_NE(o.out.find("TIMEOUT"), std::string::npos);
}

TEST(Cli, TranslateStages) {
  auto n = run("translate --flow n --to ltl " + data("example1.kb"));
  EXPECT_EQ(n.code, 0);
  EXPECT_EQ(n.out.find("__neg"), std::string::npos);
  auto z = run("translate --to ltl " + data("example1.kb"));
  EXPECT_EQ(z.code, 0);
  EXPECT_NE(z.out.find("__neg"), std::string::npos);
  auto smv = run("translate --flow n --to smv " + data("example1.kb"));
  EXPECT_EQ(smv.out.rfind("MODULE main", 0), 0u);
  auto qtl = run("translate --to qtl1 " + data("example2.kb"));
  EXPECT_NE(qtl.out.find("ALWF ALWP"), std::string::npos);
  EXPECT_EQ(run("translate --to bogus " + data("example1.kb")).code, 2);
  EXPECT_EQ(run("translate /nonexistent.kb").code, 2);
}

TEST(Cli, TraceHasAllStages) {
  TempDir t;
  auto trace = t / "trace.json";
  EXPECT_EQ(run("translate --to ltl --emit-trace " + trace.string() + " " + data("example2.kb")).code, 0);
  std::stringstream ss;
  ss << std::ifstream(trace).rdbuf();
  for (const char* stage : {"\"kb\"", "\"qtl1\"", "\"ground\"", "\"depast\""}) {
    EXPECT_NE(ss.str().find(stage), std::string::npos) << stage;
  }
}

TEST(Cli, GenWritesKbsAndManifest) {
  TempDir t;
  EXPECT_EQ(run("gen -F 3 -N 2 --Lt 2 --Lc 3 --abox-size 4 -o " + t.path().string()).code, 0);
  std::size_t kbs = 0;
  for (const auto& e : fs::directory_iterator(t.path())) kbs += e.path().extension() == ".kb";
  EXPECT_EQ(kbs, 3u);
  EXPECT_TRUE(fs::exists(t / "index.json"));
  for (const auto& e : fs::directory_iterator(t.path())) {
    if (e.path().extension() == ".kb") {
      EXPECT_EQ(run("translate --to qtl1 " + e.path().string()).code, 0);
    }
  }
}

TEST(Cli, BenchWritesOneRowPerInstanceAndSolver) {
  TempDir t;
  auto csv = t / "out.csv";
  EXPECT_EQ(run("bench -F 2 -N 1 --Lt 1 --Lc 2 --flow n -o " + csv.string()).code, 0);
  std::ifstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].rfind("seed,F-index,N,", 0), 0u);
  EXPECT_EQ(lines[0].back(), '\r');
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_NE(lines[i].find(",oracle,"), std::string::npos);
}

TEST(Cli, LtlSatCommand) {
  TempDir t;
  write(t / "f.ltl", "G F a & F G ~a\n");
  EXPECT_EQ(run("ltl-sat " + (t / "f.ltl").string()).code, 1);
  write(t / "g.ltl", "Y a & ~ O ~a\n");
  EXPECT_EQ(run("ltl-sat " + (t / "g.ltl").string()).code, 2);
  auto z = run("ltl-sat --flow z --model " + (t / "g.ltl").string());
  EXPECT_EQ(z.code, 0);
  EXPECT_EQ(z.out.rfind("SAT", 0), 0u);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("gen -F 0").code, 2);
}
