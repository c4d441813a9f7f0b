#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcr/battery.hpp"
#include "fcr/degradation.hpp"
#include "fcr/droop.hpp"
#include "fcr/ingest.hpp"
#include "fcr/market_case.hpp"
#include "fcr/milp_model.hpp"

namespace fcr {

/// LER technical requirement factors.
inline constexpr double kFcrNPowerFactor = 1.34;
inline constexpr double kFcrDOppositeFactor = 0.2;
inline constexpr double kFcrDEnduranceHours = 1.0 / 3.0;

struct BuildOptions {
  bool degradation_in_objective = true;
  /// Drop per-step charge/discharge binaries; requires p_min == 0.
  bool relax_step_binaries = false;
  /// Credit the electricity tax on discharged baseline energy.
  bool da_revenue_includes_tax = true;
  /// Apply charge/discharge efficiencies to FCR activation energy as well.
  bool efficiency_on_activation = false;
  /// Fix the hourly baseline to zero (pure reserve operation).
  bool force_zero_baseline = false;
  /// Include the LER power and endurance requirement rows.
  bool enforce_requirements = true;
};

struct DayInputs {
  TimeGrid grid;
  PriceSeries prices;  // grid.hours entries
  EnergyContentSeries contents;
  BatterySpec spec;
  CalendarLinearization cal_lin;
  CycleLinearization cyc_lin;
  double s0 = 0.5;
  MarketCase market_case = MarketCase::MULTI;
  BuildOptions options;
};

class InfeasibleBounds : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form model size; see build_day_model.
struct ModelSize {
  Index variables = 0, constraints = 0, binaries = 0;
};
ModelSize expected_model_size(const TimeGrid& grid, const BuildOptions& options);

/// Assembles one day's scheduling MILP.
///
/// Column layout: per hour h the baseline pair p_ch_bl/p_ds_bl with their
/// binaries, the three bids bid_n/bid_du/bid_dd with participation binaries;
/// per step t the realized p_ch/p_ds (plus binaries unless relaxed), the SoE
/// after the step, and, when degradation is priced, three calendar span
/// binaries cal_z and SoE shares cal_s. Two day-level columns deg_cal and
/// deg_cyc carry the linearized aging cost.
MilpModel build_day_model(const DayInputs& inputs);

struct SolverStats {
  std::string status;
  double gap = 0.0;
  double wall_time = 0.0;
};

/// One optimized day in market units (MW, MWh, EUR).
struct DaySolution {
  Index day_index = 0;
  TimeGrid grid;
  double s0 = 0.0;
  Eigen::ArrayXd p_ch_bl, p_ds_bl, bid_n, bid_du, bid_dd;  // per hour
  Eigen::ArrayXd p_ch, p_ds, soe;                          // per step

  double r_da = 0, r_n = 0, r_du = 0, r_dd = 0, c_da = 0;
  double c_deg_cal_lin = 0, c_deg_cyc_lin = 0;
  double objective = 0;  // model objective at the extracted point

  AgingTotals aging;  // nonlinear, post-calculated
  SolverStats stats;

  double r_fcr() const { return r_n + r_du + r_dd; }
  double baseline(Index h) const { return p_ch_bl[h] - p_ds_bl[h]; }
  double final_soe() const { return soe.size() ? soe[soe.size() - 1] : s0; }
  /// SoE at the start of hour h.
  double hour_start_soe(Index h) const {
    return h == 0 ? s0 : soe[grid.first_step(h) - 1];
  }
  /// Daily profit with the post-calculated nonlinear aging cost.
  double profit() const { return r_da + r_fcr() - c_da - aging.total_cost(); }
};

/// Unpacks a solver vector by registry name. Realized power is reported as
/// the non-overlapping split of p_ch - p_ds.
DaySolution extract_day_solution(const MilpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const DayInputs& inputs);

/// Rebuilds a full column vector for `model` from the decision values of a
/// DaySolution: binaries, calendar shares and cost columns are completed
/// from the primary values.
Eigen::VectorXd pack_day_solution(const MilpModel& model, const DaySolution& solution, const DayInputs& inputs);

/// Revenue terms of a schedule evaluated directly from prices and contents,
/// without the model. Used to cross-check extraction.
struct RevenueBreakdown {
  double r_da = 0, r_n = 0, r_du = 0, r_dd = 0, c_da = 0;
};
RevenueBreakdown evaluate_revenue(const DaySolution& solution, const DayInputs& inputs);

}  // namespace fcr
