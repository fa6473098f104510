#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "tdlite/pipeline.hpp"

namespace tdlcli {

tdl::RunOptions Limits::run_options() const {
  tdl::RunOptions o;
  o.cpu_seconds = cpu_seconds;
  o.memory_bytes = memory_bytes;
  o.keep_artifacts = keep_artifacts;
  o.artifact_root = artifact_dir;
  return o;
}

std::vector<tdl::SolverProfile> solver_registry(const std::string& file) {
  std::vector<tdl::SolverProfile> reg{tdl::oracle_profile()};
  std::string path = file;
  if (path.empty()) {
    if (const char* env = std::getenv("TDLITE_SOLVERS")) path = env;
  }
  if (!path.empty()) {
    auto more = tdl::load_profiles(path);
    reg.insert(reg.end(), more.begin(), more.end());
  }
  return reg;
}

const tdl::SolverProfile* find_profile(const std::vector<tdl::SolverProfile>& reg, const std::string& name) {
  for (const auto& p : reg) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols{
      "seed",        "F-index",       "N",           "Lt",           "Lc",           "Q",
      "Pt",          "Pg",            "flow",        "abox-size",    "qtl-nodes",    "ground-props",
      "ground-nodes", "depast-props", "depast-nodes", "translate-ms", "solver",       "verdict",
      "solver-cpu-ms", "solver-mem-bytes"};
  return cols;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

int run_bench(const BenchOptions& options) {
  const auto& spec = options.spec;
  tdl::check_spec(spec);
  auto registry = solver_registry(options.solvers_file);
  std::vector<const tdl::SolverProfile*> solvers;
  for (const auto& name : options.solvers) {
    const auto* p = find_profile(registry, name);
    if (p == nullptr) throw tdl::Error("UNKNOWN_SOLVER", "no solver profile named '" + name + "'");
    solvers.push_back(p);
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!options.out.empty() && options.out != "-") {
    file.open(options.out);
    if (!file) throw tdl::Error("IO_ERROR", "cannot write " + options.out);
    out = &file;
  }
  std::mutex out_mutex;
  *out << csv_row(bench_columns()) << std::flush;

  const tdl::RunOptions run_opts = options.limits.run_options();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.F; i = next++) {
      std::vector<std::string> base{std::to_string(spec.seed),
                                    std::to_string(i),
                                    std::to_string(spec.N),
                                    std::to_string(spec.Lt),
                                    std::to_string(spec.Lc),
                                    std::to_string(spec.Q),
                                    spec.Pt ? num(*spec.Pt) : "",
                                    num(spec.Pg),
                                    std::string(tdl::flow_name(spec.flow)),
                                    std::to_string(spec.abox_size)};
      std::optional<tdl::PipelineResult> pr;
      std::string translate_error;
      try {
        pr = tdl::run_pipeline(tdl::random_instance(spec, i), spec.flow);
      } catch (const std::exception& e) {
        translate_error = e.what();
      }
      if (pr) {
        const auto& st = pr->stages;
        base.push_back(std::to_string(st[0].nodes));
        base.push_back(std::to_string(st[1].props));
        base.push_back(std::to_string(st[1].nodes));
        base.push_back(st.size() > 2 ? std::to_string(st[2].props) : "");
        base.push_back(st.size() > 2 ? std::to_string(st[2].nodes) : "");
        base.push_back(num(pr->total_ms()));
      } else {
        base.insert(base.end(), 6, "");
      }
      for (const auto* solver : solvers) {
        std::vector<std::string> row = base;
        row.push_back(solver->name);
        if (pr) {
          auto rr = tdl::run_solver(*solver, pr->final_formula(), run_opts);
          row.push_back(std::string(tdl::verdict_name(rr.verdict)));
          row.push_back(num(rr.cpu_ms));
          row.push_back(std::to_string(rr.max_memory_bytes));
        } else {
          row.insert(row.end(), {"FAIL", "", ""});
        }
        std::lock_guard lock(out_mutex);
        *out << csv_row(row) << std::flush;
      }
      if (!translate_error.empty()) {
        std::lock_guard lock(out_mutex);
        std::cerr << "instance " << i << ": " << translate_error << "\n";
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, spec.F));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return 0;
}

}  // namespace tdlcli
