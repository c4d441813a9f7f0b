#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcr/milp_model.hpp"

namespace fcr {

enum class SolveStatus { Optimal, Infeasible, TimeLimit, BackendError };
const char* to_string(SolveStatus status);

struct SolveLimits {
  double time_limit = 600.0;  // seconds
  double gap = 1e-6;          // relative MIP gap
};

struct SolveResult {
  SolveStatus status = SolveStatus::BackendError;
  double objective = 0.0;
  Eigen::VectorXd solution;
  double gap = 0.0;
  double wall_time = 0.0;
  std::string message;
};

// ---------------------------------------------------------------- export

enum class ModelFormat { FixedMps, FreeMps, Lp };

class UnsupportedFormat : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "mps" (fixed), "free-mps" or "lp".
ModelFormat parse_model_format(const std::string& text);

struct ExportResult {
  std::filesystem::path model_file;
  std::filesystem::path name_map_file;  // empty when every name was written verbatim
  std::vector<std::string> column_names;  // as written
  std::vector<std::string> row_names;
};

/// Maximum name length written by the free-form writers.
inline constexpr std::size_t kMaxExportName = 255;

/// Writes the model deterministically. Names that the format cannot carry
/// verbatim are replaced and listed in `<file>.names.csv`
/// (`kind,index,written,original`).
ExportResult export_model(const MilpModel& model, ModelFormat format, const std::filesystem::path& path,
                          const std::string& name = "fcrday");

// -------------------------------------------------------------- backends

class SolutionParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a HiGHS-style solution file (`Model status` block followed by
/// `# Columns N` and `name value` lines). A `# MIP gap <g>` line, when
/// present, fills the gap.
SolveResult parse_solution_file(const std::filesystem::path& path, const std::vector<std::string>& column_names);

/// Command template with {model_file}, {solution_file}, {time_limit} and {gap}.
std::string default_solver_command();

/// Runs an external MILP solver on an exported free-MPS file.
SolveResult solve_external(const MilpModel& model, const std::string& solver_cmd, const SolveLimits& limits = {});

class TooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class Unbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MicroCaps {
  Index max_binaries = 24;
  Index max_continuous = 200;
};

/// Exact solver for tiny models: implicit enumeration of the binary
/// assignments with a dense simplex at every node.
SolveResult solve_micro(const MilpModel& model, const SolveLimits& limits = {}, const MicroCaps& caps = {});

/// Pluggable backend used by the orchestrator.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const MilpModel& model, const SolveLimits& limits) const = 0;
  virtual std::string name() const = 0;
};

class ExternalSolver final : public SolverBackend {
 public:
  explicit ExternalSolver(std::string command = default_solver_command()) : command_(std::move(command)) {}
  SolveResult solve(const MilpModel& model, const SolveLimits& limits) const override {
    return solve_external(model, command_, limits);
  }
  std::string name() const override { return "external"; }
  const std::string& command() const { return command_; }

 private:
  std::string command_;
};

class MicroSolver final : public SolverBackend {
 public:
  explicit MicroSolver(MicroCaps caps = {}) : caps_(caps) {}
  SolveResult solve(const MilpModel& model, const SolveLimits& limits) const override {
    return solve_micro(model, limits, caps_);
  }
  std::string name() const override { return "micro"; }

 private:
  MicroCaps caps_;
};

std::unique_ptr<SolverBackend> make_backend(const std::string& kind, const std::string& command);

}  // namespace fcr
