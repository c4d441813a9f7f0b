#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fcr/orchestrator.hpp"

namespace fcr {

struct MonetaryRow {
  MarketCase market_case;
  bool degradation_in_objective;
  double profit = 0;         // EUR
  double calendar_aging = 0;  // EUR
  double cycle_aging = 0;     // EUR
  double total_aging = 0;     // EUR
  double calendar_pct = 0, cycle_pct = 0;  // capacity lost, %
  /// (with - without) / without in percent; NaN when either run is missing.
  double delta_total_aging_pct = 0;
};
using MonetaryTable = std::vector<MonetaryRow>;

MonetaryTable monetary_table(const std::vector<HorizonResult>& runs);

struct MarketMixRow {
  MarketCase market_case;
  bool degradation_in_objective;
  std::array<Index, kMixLabelCount> hours{};
};
std::vector<MarketMixRow> market_mix_table(const std::vector<HorizonResult>& runs);

enum class HistVariable { SoEStep, PowerStep, SoEHourStart, BaselineHour, BidSumHour };
inline constexpr int kHistVariableCount = 5;
const char* to_string(HistVariable v);

struct HistogramSpec {
  HistVariable variable;
  std::vector<double> edges;  // increasing; the last bin is closed
};

/// Default bins for a battery: SoE over [0, capacity], powers over
/// [-p_max, p_max], bid sums over [0, 5 p_max].
HistogramSpec default_histogram_spec(HistVariable v, const BatterySpec& battery);

struct Histogram {
  HistogramSpec spec;
  std::vector<double> percent;  // per bin, sums to 100
  Index samples = 0;
  Index outside = 0;  // samples beyond the edges, clamped into the end bins
  double q1 = 0, q2 = 0, q3 = 0;  // linear-interpolation quartiles
};

/// Samples of `v` over a run, in time order.
std::vector<double> histogram_samples(const HorizonResult& result, HistVariable v);
Histogram histogram(const HorizonResult& result, const HistogramSpec& spec);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

struct ReportFiles {
  std::vector<std::filesystem::path> files;
};

/// Writes monetary.csv, market_mix.csv, histograms.csv, quartiles.csv and
/// manifest.json into `dir`. Output depends only on the arguments.
ReportFiles write_report(const std::filesystem::path& dir, const std::vector<HorizonResult>& runs,
                         const BatterySpec& battery, const RunMetadata& meta);

/// Loads every checkpoint under `dir` in case/mode order.
std::vector<HorizonResult> load_checkpoints(const std::filesystem::path& dir, RunMetadata* meta = nullptr);

}  // namespace fcr
