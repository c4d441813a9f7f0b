#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "fcr/battery.hpp"

namespace fcr {

struct AgingModelOptions {
  /// Evaluate the Arrhenius factor as exp(+Ea/(R K)) instead of
  /// exp(-Ea/(R K)). Only for auditing the printed sign; magnitudes are
  /// nonsensical with it.
  bool arrhenius_positive_exponent = false;
  /// Denominator factor of the OM annuity term; the interest rate when unset.
  std::optional<double> npv_alpha;
};

struct BatteryNpv {
  double value = 0;  // EUR
  double replacement_cost = 0;
  double om_cost = 0;
  int lifetime_years = 0;
  double interest_rate = 0;
  double salvage_ratio = 0;
  double alpha = 0;
};

/// Discounted replacement (net of salvage) plus OM annuity.
BatteryNpv battery_npv(const BatterySpec& spec, const AgingModelOptions& options = {});

/// EUR per percent of capacity lost: NPV / (100 % - EOL %).
double cost_per_percent(const BatteryNpv& npv, const BatterySpec& spec);

/// Calendar stress factor G for a SoC given in percent.
double calendar_stress(double soc_percent, const AgingCoefficients& c);

double arrhenius_factor(double temperature, const AgingCoefficients& c, const AgingModelOptions& options = {});

/// Percent capacity lost to calendar aging while resting at `soe` for
/// `dt_seconds`, starting at battery age `age_days`. Increments telescope:
/// summing consecutive steps equals the cumulative sqrt-time law.
double calendar_aging_step(double soe, double temperature, double age_days, double dt_seconds,
                           const AgingCoefficients& c, double capacity, const AgingModelOptions& options = {});

/// Percent capacity lost to cycling at constant power for `dt_seconds`.
/// C-rate is (p_ch + p_ds) / capacity; throughput is normalized by capacity
/// and scaled by `ah_per_unit` onto the model's Ah axis.
double cycle_aging_step(double p_ch, double p_ds, double dt_seconds, const AgingCoefficients& c, double capacity,
                        double ah_per_unit);

/// Secant of the per-step calendar cost over one SoC span.
struct CalendarSegment {
  double lo = 0, hi = 0;      // MWh
  double slope = 0;           // EUR per MWh per step
  double intercept = 0;       // EUR per step
  double max_error = 0;       // EUR per step, largest |secant - curve| within the span
  double value(double soe) const { return intercept + slope * soe; }
};

struct CalendarLinearization {
  std::array<CalendarSegment, 3> segments;
  double age_days = 0;
  double dt_seconds = 0;

  /// Secant value on the span that owns `soe` (spans are closed on the right).
  double value(double soe) const;
};

/// Nonlinear per-step calendar cost in EUR, the curve the secants approximate.
double calendar_step_cost(double soe, const BatterySpec& spec, double age_days, double dt_seconds,
                          const BatteryNpv& npv, const AgingModelOptions& options = {});

CalendarLinearization linearize_calendar(const BatterySpec& spec, double age_days, double dt_seconds,
                                         const BatteryNpv& npv, const AgingModelOptions& options = {});

class FitToleranceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CycleLinearization {
  double k_cyc = 0;  // EUR per MWh of throughput
  double fit_lo = 0, fit_hi = 0;  // MW
  int samples = 0;
  /// max over samples of |fit - curve| / curve.
  double max_relative_error = 0;
  /// |fit - curve| / curve at the top of the fit range.
  double relative_error_at_max = 0;
  /// max over samples of |fit - curve| / curve(fit_hi): error relative to full scale.
  double full_scale_error = 0;
};

/// EUR per MWh of throughput of the nonlinear cycle model at constant power.
double cycle_cost_per_mwh(double power, const BatterySpec& spec, const BatteryNpv& npv);

/// Least-squares fit of the hourly cycle cost k * P to the nonlinear cost
/// over `samples` evenly spaced powers in [0.1, 1.0] p_max. Throws
/// FitToleranceExceeded when full_scale_error exceeds `tolerance`.
CycleLinearization linearize_cycle(const BatterySpec& spec, const BatteryNpv& npv, double tolerance = 0.10,
                                   int samples = 50);

struct AgingTotals {
  double calendar_cost = 0, cycle_cost = 0;  // EUR
  double calendar_pct = 0, cycle_pct = 0;    // percent of capacity
  double total_cost() const { return calendar_cost + cycle_cost; }
  double total_pct() const { return calendar_pct + cycle_pct; }
};

/// Exact nonlinear aging over a trajectory. Step t rests at soe[t] and moves
/// p_ch[t] / p_ds[t]; the battery is `age_days` old at the first step.
AgingTotals post_calculate_aging(const Eigen::Ref<const Eigen::ArrayXd>& soe,
                                 const Eigen::Ref<const Eigen::ArrayXd>& p_ch,
                                 const Eigen::Ref<const Eigen::ArrayXd>& p_ds, double dt_seconds,
                                 const BatterySpec& spec, double age_days, const BatteryNpv& npv,
                                 const AgingModelOptions& options = {});

/// Writes `span,lo,hi,slope,intercept,max_err` plus a `cycle` row.
void write_linearization_csv(const std::filesystem::path& path, const CalendarLinearization& cal,
                             const CycleLinearization& cyc);

}  // namespace fcr
