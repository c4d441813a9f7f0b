#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "fcr/time_grid.hpp"

namespace fcr {

/// Data problems found while reading input series.
class IngestError : public std::runtime_error {
 public:
  enum class Kind { MissingFile, SchemaMismatch, GapTooLong, OutOfRangeSample, MissingHour };

  IngestError(Kind kind, std::string message, std::int64_t where = -1)
      : std::runtime_error(std::move(message)), kind_(kind), where_(where) {}

  Kind kind() const { return kind_; }
  /// Offending timestamp (epoch s) or hour index, -1 when not applicable.
  std::int64_t where() const { return where_; }

 private:
  Kind kind_;
  std::int64_t where_;
};

/// Grid frequency in Hz, one sample per step of the horizon.
struct FrequencyTrace {
  Eigen::ArrayXd hz;

  Index size() const { return hz.size(); }
  /// Samples of day d.
  auto day(const Horizon& horizon, Index d) const {
    return hz.segment(d * horizon.steps_per_day(), horizon.steps_per_day());
  }
};

/// Hourly market prices. Energy prices in EUR/MWh, capacity prices in
/// EUR/MW per hour. Tariff and tax are scalars from the run configuration.
struct PriceSeries {
  Eigen::ArrayXd spot, fcr_n, fcr_du, fcr_dd, up_reg, down_reg;
  double grid_tariff = 0.0;
  double tax = 0.0;

  Index hours() const { return spot.size(); }
  /// Hours [first, first + count) as a new series.
  PriceSeries slice(Index first, Index count) const;
};

inline constexpr double kMinPlausibleHz = 45.0;
inline constexpr double kMaxPlausibleHz = 55.0;

struct FrequencyLoadOptions {
  /// Longest run of missing samples (in seconds) filled by previous-value hold.
  std::int64_t max_gap_seconds = 300;
};

/// Reads a `timestamp,hz` CSV and aligns it to the horizon.
FrequencyTrace load_frequency(const std::filesystem::path& path, const Horizon& horizon,
                              const FrequencyLoadOptions& options = {});

/// Reads an hourly price CSV. Rows must be consecutive hours starting at
/// `start_epoch` (or at the first row when start_epoch < 0).
PriceSeries load_prices(const std::filesystem::path& path, Index horizon_hours,
                        std::int64_t start_epoch = -1);

void write_frequency_csv(const std::filesystem::path& path, const FrequencyTrace& trace,
                         const Horizon& horizon);
void write_prices_csv(const std::filesystem::path& path, const PriceSeries& prices,
                      std::int64_t start_epoch);

/// Mean-reverting (Ornstein-Uhlenbeck) frequency generator.
struct SynthFrequencyParams {
  double mean_hz = 50.0;
  double reversion_per_second = 1.0 / 300.0;
  double volatility = 0.005;  // Hz / sqrt(s)
  double clamp_lo = 49.0;
  double clamp_hi = 51.0;
  double initial_hz = 50.0;
};

FrequencyTrace synth_frequency(std::uint64_t seed, const Horizon& horizon,
                               const SynthFrequencyParams& params = {});

/// Synthetic hourly prices with a daily shape, for desk-scale runs.
PriceSeries synth_prices(std::uint64_t seed, Index hours);

/// ISO-8601 UTC ("2022-01-01T00:00:00Z", "2022-01-01 00:00:00", or a bare
/// date) to epoch seconds. Throws IngestError(SchemaMismatch) on bad input.
std::int64_t parse_utc(const std::string& text);
std::string format_utc(std::int64_t epoch);

}  // namespace fcr
