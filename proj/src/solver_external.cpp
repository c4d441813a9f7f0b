#include <fcntl.h>
#include <fmt/format.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fcr/solver.hpp"

#ifndef FCR_DEFAULT_SOLVER_COMMAND
#define FCR_DEFAULT_SOLVER_COMMAND \
  "highs --model_file {model_file} --solution_file {solution_file} --time_limit {time_limit}"
#endif

namespace fcr {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::BackendError: return "BackendError";
  }
  return "?";
}

std::string default_solver_command() {
  if (const char* env = std::getenv("FCR_SOLVER_CMD"); env && *env) return env;
  return FCR_DEFAULT_SOLVER_COMMAND;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string read_tail(const std::filesystem::path& p, std::size_t max_chars = 800) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  auto s = ss.str();
  if (s.size() > max_chars) s = "..." + s.substr(s.size() - max_chars);
  return trim(s);
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q.push_back(c);
  }
  return q + "'";
}

class TempDir {
 public:
  TempDir() {
    auto tmpl = (std::filesystem::temp_directory_path() / "fcr-solve-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("cannot create a temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    if (std::getenv("FCR_KEEP_SOLVER_FILES")) return;
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct ProcessOutcome {
  bool timed_out = false;
  bool signaled = false;
  int code = 0;
};

ProcessOutcome run_shell(const std::string& cmd, const std::filesystem::path& out_file,
                         const std::filesystem::path& err_file, double deadline_seconds) {
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    const int out = open(out_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = open(err_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out >= 0) dup2(out, STDOUT_FILENO);
    if (err >= 0) dup2(err, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  ProcessOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  auto sleep = std::chrono::milliseconds(1);
  while (true) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > deadline_seconds) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      outcome.timed_out = true;
      return outcome;
    }
    std::this_thread::sleep_for(sleep);
    sleep = std::min(sleep * 2, std::chrono::milliseconds(50));
  }
  if (WIFSIGNALED(status)) {
    outcome.signaled = true;
    outcome.code = WTERMSIG(status);
  } else {
    outcome.code = WEXITSTATUS(status);
  }
  return outcome;
}

}  // namespace

SolveResult parse_solution_file(const std::filesystem::path& path, const std::vector<std::string>& column_names) {
  std::ifstream in(path);
  if (!in) throw SolutionParseError("no solution file at " + path.string());
  SolveResult r;
  std::string line;
  std::string model_status;
  bool have_columns = false;
  const auto n = static_cast<Index>(column_names.size());
  r.solution = Eigen::VectorXd::Zero(n);
  while (std::getline(in, line)) {
    line = trim(line);
    if (line == "Model status") {
      if (!std::getline(in, model_status)) throw SolutionParseError("truncated model status");
      model_status = trim(model_status);
    } else if (line.rfind("Model status:", 0) == 0) {
      model_status = trim(line.substr(13));
    } else if (line.rfind("# MIP gap", 0) == 0) {
      r.gap = std::stod(line.substr(9));
    } else if (line.rfind("Objective", 0) == 0) {
      r.objective = std::stod(line.substr(9));
    } else if (line.rfind("# Columns", 0) == 0 && !have_columns) {
      const auto count = std::stoll(line.substr(9));
      if (count != n) throw SolutionParseError(fmt::format("solution has {} columns, model has {}", count, n));
      // Writers that reorder columns (LP readers number them by first
      // appearance) are matched by name.
      std::unordered_map<std::string, Index> by_name;
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      for (Index j = 0; j < n; ++j) {
        if (!std::getline(in, line)) throw SolutionParseError("truncated column block");
        std::istringstream ss(line);
        std::string name;
        double value = 0;
        if (!(ss >> name >> value)) throw SolutionParseError("bad column line: " + line);
        Index at = j;
        if (name != column_names[static_cast<std::size_t>(j)]) {
          if (by_name.empty())
            for (Index k = 0; k < n; ++k) by_name.emplace(column_names[static_cast<std::size_t>(k)], k);
          const auto it = by_name.find(name);
          if (it == by_name.end()) throw SolutionParseError(fmt::format("unknown column '{}' in solution", name));
          at = it->second;
        }
        if (seen[static_cast<std::size_t>(at)]) throw SolutionParseError(fmt::format("column '{}' repeated", name));
        seen[static_cast<std::size_t>(at)] = true;
        r.solution[at] = value;
      }
      have_columns = true;
    }
  }
  if (model_status.empty()) throw SolutionParseError("solution file has no model status");
  if (model_status == "Optimal") r.status = SolveStatus::Optimal;
  else if (model_status == "Infeasible") r.status = SolveStatus::Infeasible;
  else if (model_status.find("ime limit") != std::string::npos) r.status = SolveStatus::TimeLimit;
  else {
    r.status = SolveStatus::BackendError;
    r.message = "solver reported '" + model_status + "'";
  }
  if ((r.status == SolveStatus::Optimal) && !have_columns) throw SolutionParseError("optimal status without primal values");
  if (!have_columns) r.solution.resize(0);
  return r;
}

SolveResult solve_external(const MilpModel& model, const std::string& solver_cmd, const SolveLimits& limits) {
  const auto start = std::chrono::steady_clock::now();
  TempDir dir;
  const auto model_file = dir.path() / "model.mps";
  const auto solution_file = dir.path() / "model.sol";
  const auto exported = export_model(model, ModelFormat::FreeMps, model_file);

  std::string cmd = solver_cmd;
  replace_all(cmd, "{model_file}", shell_quote(model_file.string()));
  replace_all(cmd, "{solution_file}", shell_quote(solution_file.string()));
  replace_all(cmd, "{time_limit}", fmt::format("{}", limits.time_limit));
  replace_all(cmd, "{gap}", fmt::format("{}", limits.gap));

  // The solver gets the limit itself; the hard kill leaves it some slack.
  const double deadline = limits.time_limit + std::max(5.0, 0.1 * limits.time_limit);
  const auto outcome = run_shell(cmd, dir.path() / "solver.out", dir.path() / "solver.err", deadline);
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  SolveResult result;
  if (outcome.timed_out || outcome.signaled || outcome.code != 0) {
    if (outcome.timed_out) {
      result.status = SolveStatus::TimeLimit;
      result.message = fmt::format("killed after {:.1f} s", deadline);
      if (std::filesystem::exists(solution_file)) {
        try {
          auto partial = parse_solution_file(solution_file, exported.column_names);
          result.solution = partial.solution;
        } catch (const SolutionParseError&) {
        }
      }
    } else {
      result.status = SolveStatus::BackendError;
      result.message = outcome.signaled ? fmt::format("solver terminated by signal {}", outcome.code)
                                        : fmt::format("solver exited with code {}", outcome.code);
      const auto err = read_tail(dir.path() / "solver.err");
      if (!err.empty()) result.message += ": " + err;
    }
    result.wall_time = elapsed();
    return result;
  }

  result = parse_solution_file(solution_file, exported.column_names);
  result.wall_time = elapsed();
  if (result.solution.size() == model.num_variables()) {
    result.objective = model.evaluate_objective(result.solution);
    if (result.status == SolveStatus::Optimal) {
      const auto report = validate_solution(model, result.solution);
      if (!report.ok()) {
        result.status = SolveStatus::BackendError;
        result.message = fmt::format("solver solution violates the model (bound {:.3g}, integrality {:.3g}, {} row families)",
                                     report.worst_bound, report.worst_integrality, report.rows.size());
      }
    }
  }
  return result;
}

std::unique_ptr<SolverBackend> make_backend(const std::string& kind, const std::string& command) {
  if (kind == "external") return std::make_unique<ExternalSolver>(command.empty() ? default_solver_command() : command);
  if (kind == "micro") return std::make_unique<MicroSolver>();
  throw std::invalid_argument("unknown solver backend '" + kind + "' (external, micro)");
}

}  // namespace fcr
