#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcr/day_model.hpp"
#include "fcr/solver.hpp"

namespace fcr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(Index day, const std::string& msg) : std::runtime_error(msg), day_(day) {}
  Index day() const { return day_; }

 private:
  Index day_;
};

/// Everything one experiment needs. Units: MW, MWh, EUR, EUR/MWh, EUR/MW.
struct RunConfig {
  std::vector<MarketCase> cases{kAllCases.begin(), kAllCases.end()};
  /// Degradation modes to run: true = priced in the objective.
  std::vector<bool> degradation_modes{true, false};

  std::string start_date = "2022-01-01";
  Index days = 1;
  Index steps_per_hour = 60;
  std::filesystem::path frequency_file;
  std::filesystem::path price_file;
  std::optional<std::uint64_t> synthetic_seed;
  std::int64_t max_gap_seconds = 300;

  BatterySpec battery;
  DroopParams droop;
  AgingModelOptions aging;
  BuildOptions build;  // degradation_in_objective is set per mode
  std::optional<double> initial_soe;  // MWh; default half the capacity
  double start_age_days = 0.0;
  double grid_tariff = 0.0;  // EUR/MWh
  double tax = 0.0;          // EUR/MWh
  double cycle_fit_tolerance = 0.10;
  /// Calendar secants at each day's midpoint age instead of the horizon's.
  bool relinearize_daily = false;

  std::string solver = "external";
  std::string solver_command;  // empty: built-in default
  SolveLimits limits;

  std::filesystem::path output_dir = "fcr-out";

  double s0() const { return initial_soe.value_or(0.5 * battery.capacity); }
  Horizon horizon() const;
  /// Throws ConfigError on inconsistent values.
  void validate() const;
  /// Canonical `key = value` text (unset keys omitted); equal configs give
  /// equal text and parse_config reads it back.
  std::string canonical() const;
};

/// Flat `key = value` file, `#` starts a comment. Unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Ingested (or synthesized) series covering the configured horizon.
struct ScenarioData {
  Horizon horizon;
  FrequencyTrace frequency;
  PriceSeries prices;
  std::uint64_t hash() const;
};

ScenarioData load_scenario(const RunConfig& config);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 14695981039346656037ull);

enum class MixLabel { None, N, DU, DD, N_DU, N_DD, DU_DD, All };
inline constexpr int kMixLabelCount = 8;
const char* to_string(MixLabel label);

/// Label per hour from the bids strictly above 1e-9 MW.
MixLabel classify_hour(double bid_n, double bid_du, double bid_dd);
std::vector<MixLabel> classify_market_mix(const DaySolution& day);

struct HorizonResult {
  MarketCase market_case = MarketCase::MULTI;
  bool degradation_in_objective = true;
  std::vector<DaySolution> days;

  // Folds of the per-day values.
  double profit = 0;
  double r_da = 0, r_fcr = 0, c_da = 0;
  AgingTotals aging;
  std::array<Index, kMixLabelCount> mix{};

  std::string label() const;
  void aggregate();
};

/// Inputs of day d: slices, energy content, linearizations.
DayInputs make_day_inputs(const RunConfig& config, const ScenarioData& data, Index day, double s0,
                          MarketCase market_case, bool degradation_in_objective);

/// Builds, solves and checks one day; throws SolverFailure.
DaySolution solve_day(const DayInputs& inputs, const SolverBackend& backend, const SolveLimits& limits,
                      const RunConfig& config);

struct RunMetadata {
  std::uint64_t config_hash = 0;
  std::uint64_t data_hash = 0;
  std::string config_text;  // RunConfig::canonical()
};

/// Days in order with SoE carry-over. When `checkpoint_dir` is set the
/// per-day solutions are persisted there after every day and a matching
/// checkpoint is resumed.
HorizonResult run_case(const RunConfig& config, const ScenarioData& data, MarketCase market_case,
                       bool degradation_in_objective, const SolverBackend& backend,
                       const std::filesystem::path& checkpoint_dir = {});

struct MatrixEntry {
  MarketCase market_case;
  bool degradation_in_objective;
  std::optional<HorizonResult> result;
  std::string error;  // set when the case failed
  int exit_class = 0;  // 3 solver failure, 4 data error
};

/// Every configured case and mode; a failing run does not stop the others.
std::vector<MatrixEntry> run_matrix(const RunConfig& config, const ScenarioData& data, const SolverBackend& backend,
                                    const std::filesystem::path& checkpoint_root = {});

// Checkpoints: one JSON file per case and mode.
std::filesystem::path checkpoint_path(const std::filesystem::path& root, MarketCase market_case,
                                      bool degradation_in_objective);
void write_checkpoint(const std::filesystem::path& path, const HorizonResult& result, const RunMetadata& meta);
/// Returns the stored result (aggregated) and its metadata.
HorizonResult read_checkpoint(const std::filesystem::path& path, RunMetadata* meta = nullptr);

}  // namespace fcr
