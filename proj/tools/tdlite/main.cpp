#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "tdlite/depast.hpp"
#include "tdlite/oracle.hpp"
#include "tdlite/parser.hpp"
#include "tdlite/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tdlcli;

namespace {

const std::map<std::string, tdl::Flow> kFlows{{"z", tdl::Flow::Z}, {"n", tdl::Flow::N}};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw tdl::Error("IO_ERROR", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw tdl::Error("IO_ERROR", "cannot write " + path);
  out << text;
}

bool is_flow_error(const tdl::Error& e) {
  return e.code() == "NEGATIVE_TIMESTAMP_IN_N_FLOW" || e.code() == "PAST_OPERATOR_IN_N_FLOW";
}

int report(const tdl::Error& e, const std::string& file) {
  std::cerr << file << ": " << e.code() << ": " << e.what() << "\n";
  return is_flow_error(e) ? kExitFlow : kExitInput;
}

std::uint64_t kb_nodes(const tdl::KnowledgeBase& kb) {
  std::uint64_t n = kb.abox.size();
  for (const auto& ci : kb.tbox) n += ci.lhs.size() + ci.rhs.size();
  return n;
}

nlohmann::json trace_json(const tdl::KnowledgeBase& kb, const tdl::PipelineResult& r) {
  nlohmann::json stages = nlohmann::json::array();
  stages.push_back({{"name", "kb"}, {"ms", 0.0}, {"nodes", kb_nodes(kb)}, {"props", 0}, {"artifact", tdl::print_kb(kb)}});
  for (const auto& s : r.stages) {
    std::string artifact;
    if (s.name == "qtl1") artifact = tdl::dump(r.qtl);
    else if (s.name == "ground") artifact = tdl::print_ltl(r.grounded);
    else if (s.name == "depast") artifact = tdl::print_ltl(*r.depasted);
    stages.push_back({{"name", s.name}, {"ms", s.ms}, {"nodes", s.nodes}, {"props", s.props}, {"artifact", artifact}});
  }
  return {{"flow", tdl::flow_name(r.flow)}, {"stages", stages}, {"total_ms", r.total_ms()}};
}

void add_limit_flags(CLI::App* cmd, Limits& limits) {
  cmd->add_option("--cpu-limit", limits.cpu_seconds, "CPU seconds per solver run (profile default, 600)");
  cmd->add_option("--mem-limit", limits.memory_bytes, "Memory bytes per solver run (profile default, 1 GiB)");
  cmd->add_flag("--keep-artifacts", limits.keep_artifacts, "Keep per-run input and output files");
  cmd->add_option("--artifact-dir", limits.artifact_dir, "Where run directories go (system temp dir)");
}

void add_spec_flags(CLI::App* cmd, tdl::BatchSpec& spec) {
  cmd->add_option("-F", spec.F, "KBs per batch")->capture_default_str();
  cmd->add_option("-N", spec.N, "Concept names = role names")->capture_default_str();
  cmd->add_option("--Lt", spec.Lt, "CIs per TBox")->capture_default_str();
  cmd->add_option("--Lc", spec.Lc, "Length of each CI side")->capture_default_str();
  cmd->add_option("-Q", spec.Q, "Largest number restriction")->capture_default_str();
  cmd->add_option("--Pt", spec.Pt, "Probability mass of the diamond/box operators (temporal mode)");
  cmd->add_option("--Pg", spec.Pg, "Probability that a role is global")->capture_default_str();
  cmd->add_option("--abox-size", spec.abox_size, "Assertions per KB")->capture_default_str();
  cmd->add_option("--seed", spec.seed, "Batch seed")->capture_default_str();
  cmd->add_option("--flow", spec.flow, "z or n")->transform(CLI::CheckedTransformer(kFlows))->option_text("z|n [z]");
  cmd->add_flag("--allow-bottom", spec.allow_bottom, "Allow BOT among length-1 concepts");
  cmd->add_option("--time-lo", spec.time_lo, "Lowest ABox timestamp (-3 for z, 0 for n)");
  cmd->add_option("--time-hi", spec.time_hi, "Highest ABox timestamp (3 for z, 6 for n)");
}

struct TranslateArgs {
  std::string file;
  tdl::Flow flow = tdl::Flow::Z;
  std::string to = "ltl";
  std::string out;
  std::string trace;
};

int cmd_translate(const TranslateArgs& a) {
  try {
    auto kb = tdl::parse_kb(read_file(a.file));
    auto r = tdl::run_pipeline(kb, a.flow);
    std::string text;
    if (a.to == "qtl1") text = tdl::dump(r.qtl);
    else if (a.to == "ltlp") text = tdl::print_ltl(r.grounded) + "\n";
    else if (a.to == "ltl" || a.to == "infix") text = tdl::emit_infix(r.final_formula()) + "\n";
    else text = tdl::emit_smv(r.final_formula());
    write_output(a.out, text);
    if (!a.trace.empty()) write_output(a.trace, trace_json(kb, r).dump(2) + "\n");
    const auto& last = r.stages.back();
    std::cerr << "stage " << last.name << ": " << last.props << " props, " << last.nodes << " nodes\n";
    return 0;
  } catch (const tdl::Error& e) {
    return report(e, a.file);
  }
}

struct CheckArgs {
  std::string file;
  tdl::Flow flow = tdl::Flow::Z;
  std::string solver = "oracle";
  std::string solvers_file;
  std::string trace;
  Limits limits;
};

int cmd_check(const CheckArgs& a) {
  tdl::KnowledgeBase kb;
  std::optional<tdl::PipelineResult> r;
  try {
    kb = tdl::parse_kb(read_file(a.file));
    r = tdl::run_pipeline(kb, a.flow);
  } catch (const tdl::Error& e) {
    return report(e, a.file);
  }
  std::vector<tdl::SolverProfile> registry;
  try {
    registry = solver_registry(a.solvers_file);
  } catch (const tdl::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kExitInput;
  }
  const auto* profile = find_profile(registry, a.solver);
  if (profile == nullptr) {
    std::cerr << "UNKNOWN_SOLVER: no solver profile named '" << a.solver << "'\n";
    return kExitInput;
  }
  auto rr = tdl::run_solver(*profile, r->final_formula(), a.limits.run_options());
  std::cout << tdl::verdict_name(rr.verdict) << "\n";
  std::cerr << "solver " << profile->name << ": cpu " << rr.cpu_ms << " ms, wall " << rr.wall_ms << " ms, memory "
            << rr.max_memory_bytes << " bytes";
  if (!rr.detail.empty()) std::cerr << " (" << rr.detail << ")";
  std::cerr << "\n";
  if (!a.trace.empty()) {
    auto j = trace_json(kb, *r);
    j["solver"] = {{"name", profile->name},       {"verdict", tdl::verdict_name(rr.verdict)},
                   {"cpu_ms", rr.cpu_ms},         {"wall_ms", rr.wall_ms},
                   {"memory_bytes", rr.max_memory_bytes}, {"digest", rr.output_digest}};
    write_output(a.trace, j.dump(2) + "\n");
  }
  switch (rr.verdict) {
    case tdl::Verdict::Sat:
      return kExitSat;
    case tdl::Verdict::Unsat:
      return kExitUnsat;
    default:
      return kExitUndecided;
  }
}

struct GenArgs {
  tdl::BatchSpec spec;
  std::string out_dir = "batch";
};

int cmd_gen(const GenArgs& a) {
  try {
    tdl::check_spec(a.spec);
    fs::create_directories(a.out_dir);
    nlohmann::json index;
    const auto& s = a.spec;
    index["spec"] = {{"F", s.F},          {"N", s.N},       {"Lt", s.Lt},
                     {"Lc", s.Lc},        {"Q", s.Q},       {"Pg", s.Pg},
                     {"abox_size", s.abox_size}, {"seed", s.seed}, {"flow", tdl::flow_name(s.flow)},
                     {"allow_bottom", s.allow_bottom}, {"time_lo", s.window_lo()}, {"time_hi", s.window_hi()}};
    index["spec"]["Pt"] = s.Pt ? nlohmann::json(*s.Pt) : nlohmann::json(nullptr);
    index["instances"] = nlohmann::json::array();
    const int width = static_cast<int>(std::to_string(s.F - 1).size());
    for (std::size_t i = 0; i < s.F; ++i) {
      std::ostringstream name;
      name << "kb_" << std::setw(width) << std::setfill('0') << i << ".kb";
      write_output((fs::path(a.out_dir) / name.str()).string(), tdl::print_kb(tdl::random_instance(s, i)));
      index["instances"].push_back({{"index", i}, {"seed", tdl::instance_seed(s.seed, i)}, {"file", name.str()}});
    }
    write_output((fs::path(a.out_dir) / "index.json").string(), index.dump(2) + "\n");
    std::cerr << "wrote " << s.F << " KBs to " << a.out_dir << "\n";
    return 0;
  } catch (const tdl::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kExitInput;
  }
}

struct LtlSatArgs {
  std::string file;
  tdl::Flow flow = tdl::Flow::N;
  bool model = false;
  std::size_t max_elementary = tdl::LtlSatOptions{}.max_elementary;
};

void print_word(const std::vector<std::string>& alphabet, const std::vector<tdl::Valuation>& part,
                const std::string& label) {
  std::cout << label << ":";
  for (const auto& v : part) {
    std::cout << " {";
    bool first = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i]) continue;
      std::cout << (first ? "" : ",") << alphabet[i];
      first = false;
    }
    std::cout << "}";
  }
  std::cout << "\n";
}

int cmd_ltl_sat(const LtlSatArgs& a) {
  try {
    tdl::Ltl f = tdl::parse_infix(read_file(a.file));
    if (a.flow == tdl::Flow::N && f.has_past()) {
      throw tdl::Error("PAST_OPERATOR_PRESENT", "past operators need --flow z");
    }
    auto table = a.flow == tdl::Flow::Z ? std::optional(tdl::depast_with_table(f)) : std::nullopt;
    tdl::LtlSatOptions opt;
    opt.max_elementary = a.max_elementary;
    auto r = tdl::ltl_sat(table ? table->formula : f, opt);
    std::cout << (r.verdict == tdl::SatVerdict::Sat ? "SAT" : "UNSAT") << "\n";
    if (a.model && r.model) {
      if (table) {
        auto props = tdl::ltl::props(f);
        auto w = tdl::reconstruct_z_word(*r.model, {props.begin(), props.end()});
        print_word(w.alphabet, w.left_loop, "left-loop");
        print_word(w.alphabet, w.left_prefix, "left-prefix");
        print_word(w.alphabet, w.right_prefix, "right-prefix");
        print_word(w.alphabet, w.right_loop, "right-loop");
      } else {
        print_word(r.model->alphabet, r.model->prefix, "prefix");
        print_word(r.model->alphabet, r.model->loop, "loop");
      }
    }
    return r.verdict == tdl::SatVerdict::Sat ? kExitSat : kExitUnsat;
  } catch (const tdl::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return e.code() == "RESOURCE_LIMIT" || e.code() == "FORMULA_TOO_LARGE" ? kExitUndecided : kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal DL-Lite translation and satisfiability toolkit"};
  app.require_subcommand(1);

  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "Translate a KB file to one of the pipeline stages");
  translate->add_option("kb", ta.file, "KB file ('-' for stdin)")->required();
  translate->add_option("--flow", ta.flow, "z (integers, with past) or n (naturals, future only)")
      ->transform(CLI::CheckedTransformer(kFlows))
      ->option_text("z|n [z]");
  translate->add_option("--to", ta.to, "qtl1, ltlp (grounded), ltl/infix (past-free), smv")
      ->check(CLI::IsMember({"qtl1", "ltlp", "ltl", "infix", "smv"}))
      ->capture_default_str();
  translate->add_option("-o,--out", ta.out, "Output file (stdout)");
  translate->add_option("--emit-trace", ta.trace, "Write per-stage sizes, timings and artifacts as JSON");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Decide satisfiability of a KB; exit 0 SAT, 1 UNSAT, 4 otherwise");
  check->add_option("kb", ca.file, "KB file ('-' for stdin)")->required();
  check->add_option("--flow", ca.flow, "z or n")->transform(CLI::CheckedTransformer(kFlows))->option_text("z|n [z]");
  check->add_option("--solver", ca.solver, "Solver profile name")->capture_default_str();
  check->add_option("--solvers-file", ca.solvers_file, "Profile file (default $TDLITE_SOLVERS)");
  check->add_option("--emit-trace", ca.trace, "Write the pipeline trace and run result as JSON");
  add_limit_flags(check, ca.limits);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Write a batch of random KBs and an index.json manifest");
  add_spec_flags(gen, ga.spec);
  gen->add_option("-o,--out-dir", ga.out_dir, "Output directory")->capture_default_str();

  BenchOptions bo;
  std::string solver_list = "oracle";
  auto* bench = app.add_subcommand("bench", "Generate, translate and solve a batch; one CSV row per (KB, solver)");
  add_spec_flags(bench, bo.spec);
  bench->add_option("--solvers", solver_list, "Comma-separated profile names")->capture_default_str();
  bench->add_option("--solvers-file", bo.solvers_file, "Profile file (default $TDLITE_SOLVERS)");
  bench->add_option("-o,--out", bo.out, "CSV file (stdout)");
  bench->add_option("-j,--jobs", bo.jobs, "Parallel instances")->capture_default_str();
  add_limit_flags(bench, bo.limits);

  LtlSatArgs la;
  auto* ltl_sat = app.add_subcommand("ltl-sat", "Decide an infix LTL formula with the built-in checker");
  ltl_sat->add_option("file", la.file, "Formula file ('-' for stdin)")->required();
  ltl_sat->add_option("--flow", la.flow, "n (future only) or z (past allowed, integer time)")
      ->transform(CLI::CheckedTransformer(kFlows))
      ->option_text("z|n [n]");
  ltl_sat->add_flag("--model", la.model, "Print a model when satisfiable");
  ltl_sat->add_option("--max-elementary", la.max_elementary, "Size bound of the checker")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*translate) return cmd_translate(ta);
  if (*check) return cmd_check(ca);
  if (*gen) return cmd_gen(ga);
  if (*ltl_sat) return cmd_ltl_sat(la);
  try {
    std::stringstream ss(solver_list);
    bo.solvers.clear();
    for (std::string name; std::getline(ss, name, ',');) {
      if (!name.empty()) bo.solvers.push_back(name);
    }
    return run_bench(bo);
  } catch (const tdl::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kExitInput;
  }
}
