#include "fcr/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "json.hpp"

namespace fcr {

using json = nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string(); }

const char* mode_name(bool deg) { return deg ? "with-deg" : "no-deg"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

// ------------------------------------------------------------- monetary

MonetaryTable monetary_table(const std::vector<HorizonResult>& runs) {
  MonetaryTable table;
  for (const auto& r : runs) {
    MonetaryRow row{r.market_case, r.degradation_in_objective};
    row.profit = r.profit;
    row.calendar_aging = r.aging.calendar_cost;
    row.cycle_aging = r.aging.cycle_cost;
    row.total_aging = row.calendar_aging + row.cycle_aging;
    row.calendar_pct = r.aging.calendar_pct;
    row.cycle_pct = r.aging.cycle_pct;
    row.delta_total_aging_pct = kNaN;
    table.push_back(row);
  }
  for (auto& row : table) {
    const MonetaryRow* with = nullptr;
    const MonetaryRow* without = nullptr;
    for (const auto& other : table) {
      if (other.market_case != row.market_case) continue;
      (other.degradation_in_objective ? with : without) = &other;
    }
    if (with && without && without->total_aging != 0)
      row.delta_total_aging_pct = 100.0 * (with->total_aging - without->total_aging) / without->total_aging;
  }
  return table;
}

std::vector<MarketMixRow> market_mix_table(const std::vector<HorizonResult>& runs) {
  std::vector<MarketMixRow> rows;
  for (const auto& r : runs) rows.push_back({r.market_case, r.degradation_in_objective, r.mix});
  return rows;
}

// ----------------------------------------------------------- histograms

const char* to_string(HistVariable v) {
  switch (v) {
    case HistVariable::SoEStep: return "SoE_step";
    case HistVariable::PowerStep: return "power_step";
    case HistVariable::SoEHourStart: return "SoE_hour_start";
    case HistVariable::BaselineHour: return "baseline_hour";
    case HistVariable::BidSumHour: return "bid_sum_hour";
  }
  return "?";
}

HistogramSpec default_histogram_spec(HistVariable v, const BatterySpec& battery) {
  auto linspace = [](double lo, double hi, int bins) {
    std::vector<double> e(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) e[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
    return e;
  };
  switch (v) {
    case HistVariable::SoEStep:
    case HistVariable::SoEHourStart:
      return {v, linspace(0.0, battery.capacity, 20)};
    case HistVariable::PowerStep:
    case HistVariable::BaselineHour:
      return {v, linspace(-battery.p_max, battery.p_max, 20)};
    case HistVariable::BidSumHour:
      return {v, linspace(0.0, 5.0 * battery.p_max, 25)};
  }
  throw std::invalid_argument("unknown histogram variable");
}

std::vector<double> histogram_samples(const HorizonResult& result, HistVariable v) {
  std::vector<double> out;
  for (const auto& d : result.days) {
    switch (v) {
      case HistVariable::SoEStep:
        for (Index t = 0; t < d.soe.size(); ++t) out.push_back(d.soe[t]);
        break;
      case HistVariable::PowerStep:
        for (Index t = 0; t < d.p_ch.size(); ++t) out.push_back(d.p_ch[t] - d.p_ds[t]);
        break;
      case HistVariable::SoEHourStart:
        for (Index h = 0; h < d.grid.hours; ++h) out.push_back(d.hour_start_soe(h));
        break;
      case HistVariable::BaselineHour:
        for (Index h = 0; h < d.grid.hours; ++h) out.push_back(d.baseline(h));
        break;
      case HistVariable::BidSumHour:
        for (Index h = 0; h < d.grid.hours; ++h) out.push_back(d.bid_n[h] + d.bid_du[h] + d.bid_dd[h]);
        break;
    }
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Histogram histogram(const HorizonResult& result, const HistogramSpec& spec) {
  if (spec.edges.size() < 2 || !std::is_sorted(spec.edges.begin(), spec.edges.end()))
    throw std::invalid_argument("histogram edges must be increasing with at least one bin");
  Histogram h;
  h.spec = spec;
  const auto samples = histogram_samples(result, spec.variable);
  const std::size_t bins = spec.edges.size() - 1;
  std::vector<Index> counts(bins, 0);
  for (double x : samples) {
    std::size_t b;
    if (x < spec.edges.front()) {
      b = 0;
      ++h.outside;
    } else if (x > spec.edges.back()) {
      b = bins - 1;
      ++h.outside;
    } else {
      b = static_cast<std::size_t>(std::upper_bound(spec.edges.begin(), spec.edges.end(), x) - spec.edges.begin());
      b = std::min(b == 0 ? 0 : b - 1, bins - 1);
    }
    ++counts[b];
  }
  h.samples = static_cast<Index>(samples.size());
  h.percent.assign(bins, 0.0);
  if (h.samples > 0)
    for (std::size_t b = 0; b < bins; ++b)
      h.percent[b] = 100.0 * static_cast<double>(counts[b]) / static_cast<double>(h.samples);
  h.q1 = quantile(samples, 0.25);
  h.q2 = quantile(samples, 0.50);
  h.q3 = quantile(samples, 0.75);
  return h;
}

// -------------------------------------------------------------- writing

ReportFiles write_report(const std::filesystem::path& dir, const std::vector<HorizonResult>& unordered,
                         const BatterySpec& battery, const RunMetadata& meta) {
  auto runs = unordered;
  std::stable_sort(runs.begin(), runs.end(), [](const HorizonResult& a, const HorizonResult& b) {
    if (a.market_case != b.market_case) return a.market_case < b.market_case;
    return a.degradation_in_objective && !b.degradation_in_objective;
  });
  std::filesystem::create_directories(dir);
  ReportFiles files;
  json manifest;

  std::string text = "case,mode,profit,calendar_aging,cycle_aging,total_aging,calendar_pct,cycle_pct,delta_total_aging_pct\n";
  for (const auto& r : monetary_table(runs))
    text += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(r.market_case), mode_name(r.degradation_in_objective),
                        num(r.profit), num(r.calendar_aging), num(r.cycle_aging), num(r.total_aging),
                        num(r.calendar_pct), num(r.cycle_pct), num(r.delta_total_aging_pct));
  write_text(dir / "monetary.csv", text);
  files.files.push_back(dir / "monetary.csv");

  text = "case,mode";
  for (int l = 0; l < kMixLabelCount; ++l) text += fmt::format(",{}", to_string(static_cast<MixLabel>(l)));
  text += "\n";
  for (const auto& r : market_mix_table(runs)) {
    text += fmt::format("{},{}", to_string(r.market_case), mode_name(r.degradation_in_objective));
    for (auto n : r.hours) text += fmt::format(",{}", n);
    text += "\n";
  }
  write_text(dir / "market_mix.csv", text);
  files.files.push_back(dir / "market_mix.csv");

  std::string hist = "case,mode,variable,bin_lo,bin_hi,percent\n";
  std::string quart = "case,mode,variable,samples,outside,q1,q2,q3\n";
  for (const auto& r : runs) {
    for (int v = 0; v < kHistVariableCount; ++v) {
      const auto var = static_cast<HistVariable>(v);
      const auto h = histogram(r, default_histogram_spec(var, battery));
      const auto prefix = fmt::format("{},{},{}", to_string(r.market_case), mode_name(r.degradation_in_objective), to_string(var));
      for (std::size_t b = 0; b < h.percent.size(); ++b)
        hist += fmt::format("{},{},{},{}\n", prefix, num(h.spec.edges[b]), num(h.spec.edges[b + 1]), num(h.percent[b]));
      quart += fmt::format("{},{},{},{},{},{}\n", prefix, h.samples, h.outside, num(h.q1), num(h.q2), num(h.q3));
    }
  }
  write_text(dir / "histograms.csv", hist);
  write_text(dir / "quartiles.csv", quart);
  files.files.push_back(dir / "histograms.csv");
  files.files.push_back(dir / "quartiles.csv");

  manifest["config_hash"] = fmt::format("{:016x}", meta.config_hash);
  manifest["data_hash"] = fmt::format("{:016x}", meta.data_hash);
  manifest["units"] = {
      {"profit", "EUR"},
      {"calendar_aging", "EUR"},
      {"cycle_aging", "EUR"},
      {"total_aging", "EUR"},
      {"calendar_pct", "% of capacity"},
      {"cycle_pct", "% of capacity"},
      {"delta_total_aging_pct", "%"},
      {"market_mix", "hours"},
      {"SoE_step", "MWh"},
      {"SoE_hour_start", "MWh"},
      {"power_step", "MW, charging positive"},
      {"baseline_hour", "MW, charging positive"},
      {"bid_sum_hour", "MW"},
      {"percent", "% of samples"},
  };
  json run_list = json::array();
  for (const auto& r : runs)
    run_list.push_back({{"case", std::string(to_string(r.market_case))},
                        {"mode", mode_name(r.degradation_in_objective)},
                        {"days", r.days.size()}});
  manifest["runs"] = run_list;
  json file_list = json::array();
  for (const auto& f : files.files) file_list.push_back(f.filename().string());
  manifest["files"] = file_list;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  files.files.push_back(dir / "manifest.json");
  return files;
}

std::vector<HorizonResult> load_checkpoints(const std::filesystem::path& dir, RunMetadata* meta) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("no checkpoint directory " + dir.string());
  std::vector<HorizonResult> runs;
  bool first = true;
  for (auto mc : kAllCases) {
    for (bool deg : {true, false}) {
      const auto path = checkpoint_path(dir, mc, deg);
      if (!std::filesystem::exists(path)) continue;
      RunMetadata m;
      runs.push_back(read_checkpoint(path, &m));
      if (meta && first) *meta = m;
      first = false;
    }
  }
  if (runs.empty()) throw std::runtime_error("no checkpoints in " + dir.string());
  return runs;
}

}  // namespace fcr
