#include "tdlite/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "tdlite/error.hpp"
#include "tdlite/oracle.hpp"
#include "tdlite/parser.hpp"

namespace tdl {

namespace fs = std::filesystem;

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat:
      return "SAT";
    case Verdict::Unsat:
      return "UNSAT";
    case Verdict::Timeout:
      return "TIMEOUT";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Skipped:
      return "SKIPPED";
  }
  return "FAIL";
}

bool is_definite(Verdict v) { return v == Verdict::Sat || v == Verdict::Unsat; }

namespace {

constexpr auto kPatternSyntax = std::regex::ECMAScript | std::regex::multiline;

void require_past_free(const Ltl& f) {
  if (f.has_past()) throw Error("PAST_OPERATOR_PRESENT", "solver input must be past-free");
}

std::string print_smv(const Ltl& f) {
  std::string out;
  struct Frame {
    const Ltl* f;
    int stage;
  };
  std::vector<Frame> stack{{&f, 0}};
  while (!stack.empty()) {
    Frame& fr = stack.back();
    const Ltl& g = *fr.f;
    switch (g.op()) {
      case LtlOp::False:
        out += "FALSE";
        stack.pop_back();
        continue;
      case LtlOp::Prop:
        out += g.name();
        stack.pop_back();
        continue;
      case LtlOp::And:
        if (fr.stage == 0) {
          out += '(';
          fr.stage = 1;
          stack.push_back({&g.lhs(), 0});
        } else if (fr.stage == 1) {
          out += " & ";
          fr.stage = 2;
          stack.push_back({&g.rhs(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
        continue;
      default:
        if (fr.stage == 0) {
          out += g.op() == LtlOp::Not ? "(!" : g.op() == LtlOp::NextF ? "(X " : "(F ";
          fr.stage = 1;
          stack.push_back({&g.operand(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
    }
  }
  return out;
}

class Digest {
 public:
  void update(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ull;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) / 1e6;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Rough footprint of one BDD node with its table and refcount slots.
constexpr std::uint64_t kBytesPerNode = 32;

RunResult run_oracle(const SolverProfile& profile, const Ltl& f, double cpu_seconds, std::uint64_t memory_bytes) {
  RunResult r;
  const auto t0 = std::chrono::steady_clock::now();
  const double c0 = thread_cpu_ms();
  const double limit_ms = cpu_seconds * 1e3;
  LtlSatOptions opt;
  opt.max_nodes = std::max<std::uint64_t>(memory_bytes / kBytesPerNode, 1u << 16);
  opt.should_stop = [&] { return thread_cpu_ms() - c0 > limit_ms; };
  std::string text;
  try {
    auto res = ltl_sat(f, opt);
    r.verdict = res.verdict == SatVerdict::Sat ? Verdict::Sat : Verdict::Unsat;
    r.max_memory_bytes = res.stats.peak_nodes * kBytesPerNode;
    text = std::string(verdict_name(r.verdict));
  } catch (const Error& e) {
    if (e.code() == "RESOURCE_LIMIT") {
      r.verdict = Verdict::Timeout;
    } else if (e.code() == "FORMULA_TOO_LARGE") {
      r.verdict = Verdict::Skipped;
    } else {
      r.verdict = Verdict::Fail;
    }
    r.detail = e.code() + ": " + e.what();
    text = r.detail;
  } catch (const std::bad_alloc&) {
    r.verdict = Verdict::Timeout;
    r.detail = "out of memory";
    text = r.detail;
  }
  if (r.verdict == Verdict::Timeout && r.max_memory_bytes == 0) r.max_memory_bytes = opt.max_nodes * kBytesPerNode;
  r.cpu_ms = thread_cpu_ms() - c0;
  r.wall_ms = ms_since(t0);
  Digest d;
  d.update(profile.name);
  d.update(text);
  r.output_digest = d.hex();
  return r;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string cmd, const std::string& key, const std::string& value) {
  for (std::size_t pos = 0; (pos = cmd.find(key, pos)) != std::string::npos; pos += value.size()) {
    cmd.replace(pos, key.size(), value);
  }
  return cmd;
}

struct GroupSample {
  double cpu_ms = 0;
  std::uint64_t rss_bytes = 0;
};

// CPU time and resident memory summed over the live members of a process group.
GroupSample sample_group(pid_t pgid) {
  static const double tick_ms = 1e3 / static_cast<double>(sysconf(_SC_CLK_TCK));
  static const auto page = static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
  GroupSample s;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator("/proc", ec)) {
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.find_first_not_of("0123456789") != std::string::npos) continue;
    std::ifstream in(entry.path() / "stat");
    std::string line;
    if (!std::getline(in, line)) continue;
    auto close = line.rfind(')');
    if (close == std::string::npos) continue;
    std::istringstream rest(line.substr(close + 2));
    // Fields after the command name, starting at field 3 (state).
    std::vector<std::string> fields;
    std::string tok;
    while (rest >> tok && fields.size() < 22) fields.push_back(tok);
    if (fields.size() < 22) continue;
    if (std::stol(fields[2]) != pgid) continue;
    s.cpu_ms += static_cast<double>(std::stoull(fields[11]) + std::stoull(fields[12])) * tick_ms;
    s.rss_bytes += std::stoull(fields[21]) * page;
  }
  return s;
}

RunResult run_external(const SolverProfile& profile, const Ltl& f, double cpu_seconds, std::uint64_t memory_bytes,
                       const RunOptions& options) {
  RunResult r;
  std::string input;
  try {
    input = profile.format == InputFormat::Smv ? emit_smv(f) : emit_infix(f) + "\n";
  } catch (const Error& e) {
    r.detail = e.code() + ": " + e.what();
    return r;
  }

  fs::path root = options.artifact_root.empty() ? fs::temp_directory_path() : fs::path(options.artifact_root);
  std::error_code ec;
  fs::create_directories(root, ec);
  std::string tmpl = (root / "tdlite-run-XXXXXX").string();
  if (mkdtemp(tmpl.data()) == nullptr) {
    r.detail = "cannot create run directory under " + root.string();
    return r;
  }
  const fs::path dir = tmpl;
  const fs::path input_path = dir / (profile.format == InputFormat::Smv ? "input.smv" : "input.ltl");
  std::ofstream(input_path) << input;

  std::string cmd = substitute(profile.command, "{input}", shell_quote(input_path.string()));
  cmd = substitute(cmd, "{timeout}", std::to_string(static_cast<long long>(std::ceil(cpu_seconds))));

  int out_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    r.detail = "pipe failed";
    return r;
  }
  const auto t0 = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    r.detail = "fork failed";
    return r;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    auto cpu = static_cast<rlim_t>(std::ceil(cpu_seconds));
    rlimit cpu_lim{cpu, cpu + 1};
    setrlimit(RLIMIT_CPU, &cpu_lim);
    rlimit mem_lim{static_cast<rlim_t>(memory_bytes), static_cast<rlim_t>(memory_bytes)};
    setrlimit(RLIMIT_DATA, &mem_lim);
    if (chdir(dir.c_str()) != 0) _exit(126);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);

  const double limit_ms = cpu_seconds * 1e3;
  const double wall_guard_ms = std::max(3 * limit_ms, limit_ms + 10e3);
  constexpr std::size_t kKeepOutput = 16u << 20;
  std::string output;
  Digest digest;
  GroupSample peak;
  std::string killed_for;
  bool open_pipe = true;
  int status = 0;
  rusage usage{};
  bool reaped = false;
  auto last_sample = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  while (!reaped) {
    if (open_pipe) {
      pollfd pfd{out_pipe[0], POLLIN, 0};
      poll(&pfd, 1, 20);
      char buf[65536];
      while (true) {
        ssize_t n = read(out_pipe[0], buf, sizeof buf);
        if (n > 0) {
          std::string_view chunk(buf, static_cast<std::size_t>(n));
          digest.update(chunk);
          if (output.size() < kKeepOutput) output.append(chunk.substr(0, kKeepOutput - output.size()));
          continue;
        }
        if (n == 0) open_pipe = false;
        break;
      }
    } else {
      usleep(20000);
    }
    if (wait4(pid, &status, WNOHANG, &usage) == pid) {
      reaped = true;
      break;
    }
    if (std::chrono::steady_clock::now() - last_sample >= std::chrono::milliseconds(50) && killed_for.empty()) {
      last_sample = std::chrono::steady_clock::now();
      GroupSample s = sample_group(pid);
      peak.cpu_ms = std::max(peak.cpu_ms, s.cpu_ms);
      peak.rss_bytes = std::max(peak.rss_bytes, s.rss_bytes);
      if (s.cpu_ms > limit_ms) killed_for = "cpu limit";
      else if (s.rss_bytes > memory_bytes) killed_for = "memory limit";
      else if (ms_since(t0) > wall_guard_ms) killed_for = "wall-clock guard";
      if (!killed_for.empty()) kill(-pid, SIGKILL);
    }
  }
  // Stray group members would keep the pipe open.
  kill(-pid, SIGKILL);
  if (open_pipe) {
    fcntl(out_pipe[0], F_SETFL, 0);
    char buf[65536];
    ssize_t n;
    while ((n = read(out_pipe[0], buf, sizeof buf)) > 0) {
      std::string_view chunk(buf, static_cast<std::size_t>(n));
      digest.update(chunk);
      if (output.size() < kKeepOutput) output.append(chunk.substr(0, kKeepOutput - output.size()));
    }
  }
  close(out_pipe[0]);

  r.wall_ms = ms_since(t0);
  const double rusage_cpu = static_cast<double>(usage.ru_utime.tv_sec + usage.ru_stime.tv_sec) * 1e3 +
                            static_cast<double>(usage.ru_utime.tv_usec + usage.ru_stime.tv_usec) / 1e3;
  r.cpu_ms = std::max(rusage_cpu, peak.cpu_ms);
  r.max_memory_bytes = std::max(peak.rss_bytes, static_cast<std::uint64_t>(usage.ru_maxrss) * 1024);
  r.output_digest = digest.hex();

  const bool signaled = WIFSIGNALED(status);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!killed_for.empty()) {
    r.verdict = Verdict::Timeout;
    r.detail = killed_for;
  } else if (r.cpu_ms >= limit_ms || (signaled && WTERMSIG(status) == SIGXCPU) || code == 128 + SIGXCPU) {
    r.verdict = Verdict::Timeout;
    r.detail = "cpu limit";
  } else if (code == 126 || code == 127) {
    r.verdict = Verdict::Fail;
    r.detail = "command could not be run (exit " + std::to_string(code) + ")";
  } else if (signaled) {
    r.verdict = Verdict::Fail;
    r.detail = "killed by signal " + std::to_string(WTERMSIG(status));
  } else {
    try {
      bool sat = std::regex_search(output, std::regex(profile.sat_pattern, kPatternSyntax));
      bool unsat = std::regex_search(output, std::regex(profile.unsat_pattern, kPatternSyntax));
      if (sat != unsat) {
        r.verdict = sat ? Verdict::Sat : Verdict::Unsat;
      } else {
        r.verdict = Verdict::Fail;
        r.detail = sat ? "output matches both patterns" : "output matches no pattern (exit " + std::to_string(code) + ")";
      }
    } catch (const std::regex_error& e) {
      r.verdict = Verdict::Fail;
      r.detail = std::string("bad pattern: ") + e.what();
    }
  }

  if (options.keep_artifacts) {
    std::ofstream(dir / "output.txt") << output;
  } else {
    fs::remove_all(dir, ec);
  }
  return r;
}

InputFormat format_from(const std::string& s) {
  if (s == "smv") return InputFormat::Smv;
  if (s == "infix" || s == "infix-ltl") return InputFormat::Infix;
  throw Error("PROFILE_ERROR", "unknown input format '" + s + "'");
}

}  // namespace

std::string emit_infix(const Ltl& f) {
  require_past_free(f);
  return print_ltl(f);
}

Ltl parse_infix(std::string_view text) { return parse_ltl(text); }

std::string emit_smv(const Ltl& f) {
  require_past_free(f);
  std::string out = "MODULE main\nVAR\n";
  auto names = ltl::props(f);
  // An empty VAR section is rejected by SMV front ends.
  if (names.empty()) out += "  tdlite_unused__ : boolean;\n";
  for (const auto& p : names) out += "  " + p + " : boolean;\n";
  out += "LTLSPEC !(" + print_smv(f) + ")\n";
  return out;
}

SolverProfile oracle_profile() {
  SolverProfile p;
  p.name = "oracle";
  p.builtin = true;
  return p;
}

std::vector<SolverProfile> parse_profiles(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error("PROFILE_ERROR", std::string("invalid profile document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("profiles") || !doc["profiles"].is_array()) {
    throw Error("PROFILE_ERROR", "expected an object with a 'profiles' array");
  }
  std::vector<SolverProfile> out;
  for (const auto& item : doc["profiles"]) {
    try {
      SolverProfile p;
      p.name = item.at("name").get<std::string>();
      p.command = item.at("command").get<std::string>();
      p.format = format_from(item.value("format", std::string("infix")));
      p.sat_pattern = item.at("sat_pattern").get<std::string>();
      p.unsat_pattern = item.at("unsat_pattern").get<std::string>();
      p.cpu_seconds = item.value("cpu_seconds", p.cpu_seconds);
      p.memory_bytes = item.value("memory_bytes", p.memory_bytes);
      if (item.contains("max_props") && !item["max_props"].is_null()) p.max_props = item["max_props"].get<std::size_t>();
      if (p.name == "oracle") throw Error("PROFILE_ERROR", "profile name 'oracle' is reserved");
      std::regex(p.sat_pattern, kPatternSyntax);
      std::regex(p.unsat_pattern, kPatternSyntax);
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error("PROFILE_ERROR", std::string("bad profile entry: ") + e.what());
    } catch (const std::regex_error& e) {
      throw Error("PROFILE_ERROR", std::string("bad pattern: ") + e.what());
    }
  }
  return out;
}

std::vector<SolverProfile> load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("PROFILE_ERROR", "cannot read profile file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_profiles(ss.str());
}

RunResult run_solver(const SolverProfile& profile, const Ltl& f, const RunOptions& options) {
  const double cpu_seconds = options.cpu_seconds.value_or(profile.cpu_seconds);
  const std::uint64_t memory_bytes = options.memory_bytes.value_or(profile.memory_bytes);
  if (profile.max_props && count_props(f) > *profile.max_props) {
    RunResult r;
    r.verdict = Verdict::Skipped;
    r.detail = std::to_string(count_props(f)) + " propositions, limit " + std::to_string(*profile.max_props);
    return r;
  }
  try {
    if (profile.builtin) return run_oracle(profile, f, cpu_seconds, memory_bytes);
    return run_external(profile, f, cpu_seconds, memory_bytes, options);
  } catch (const std::exception& e) {
    RunResult r;
    r.detail = e.what();
    return r;
  }
}

}  // namespace tdl
