#include "fcr/degradation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace fcr {

namespace {
constexpr double kSecondsPerDay = 86400.0;
constexpr std::array<double, 4> kSpanBreaks = {0.0, 0.5, 0.7, 1.0};  // fraction of capacity
}  // namespace

BatteryNpv battery_npv(const BatterySpec& spec, const AgingModelOptions& options) {
  if (spec.lifetime_years < 1) throw std::invalid_argument("battery_npv: lifetime must be >= 1 year");
  if (!(spec.interest_rate > 0)) throw std::invalid_argument("battery_npv: interest rate must be positive");
  const double alpha = options.npv_alpha.value_or(spec.interest_rate);
  if (!(alpha > 0)) throw std::invalid_argument("battery_npv: npv_alpha must be positive");

  BatteryNpv npv;
  npv.replacement_cost = spec.replacement_cost * spec.capacity;
  npv.om_cost = spec.om_cost;
  npv.lifetime_years = spec.lifetime_years;
  npv.interest_rate = spec.interest_rate;
  npv.salvage_ratio = spec.salvage_ratio;
  npv.alpha = alpha;
  const double growth = std::pow(1.0 + spec.interest_rate, spec.lifetime_years);
  npv.value = (1.0 - spec.salvage_ratio) * npv.replacement_cost / growth + npv.om_cost * (growth - 1.0) / (alpha * growth);
  return npv;
}

double cost_per_percent(const BatteryNpv& npv, const BatterySpec& spec) {
  return npv.value / (100.0 * (1.0 - spec.eol_retained));
}

namespace {

// Span owning `soe`; spans are closed on the right. Breakpoints are compared
// in MWh so the secants and the curve always agree on the owner.
std::size_t calendar_span(double soe, double capacity) {
  if (soe <= kSpanBreaks[1] * capacity) return 0;
  if (soe <= kSpanBreaks[2] * capacity) return 1;
  return 2;
}

double span_stress(std::size_t span, double soc, const AgingCoefficients& c) {
  switch (span) {
    case 0: return (c.a1 * soc + c.a2) * soc + c.a3;
    case 1: return (c.b1 * soc + c.b2) * soc + c.b3;
    default: return (c.c1 * soc + c.c2) * soc + c.c3;
  }
}

}  // namespace

double calendar_stress(double soc, const AgingCoefficients& c) {
  return span_stress(calendar_span(soc, 100.0), soc, c);
}

double arrhenius_factor(double temperature, const AgingCoefficients& c, const AgingModelOptions& options) {
  const double exponent = c.activation_energy / (c.gas_constant * temperature);
  return std::exp(options.arrhenius_positive_exponent ? exponent : -exponent);
}

double calendar_aging_step(double soe, double temperature, double age_days, double dt_seconds,
                           const AgingCoefficients& c, double capacity, const AgingModelOptions& options) {
  if (dt_seconds <= 0) return 0.0;
  const double dt_days = dt_seconds / kSecondsPerDay;
  const double soc = 100.0 * soe / capacity;
  return span_stress(calendar_span(soe, capacity), soc, c) * arrhenius_factor(temperature, c, options) *
         (std::sqrt(age_days + dt_days) - std::sqrt(age_days));
}

double cycle_aging_step(double p_ch, double p_ds, double dt_seconds, const AgingCoefficients& c, double capacity,
                        double ah_per_unit) {
  const double power = p_ch + p_ds;
  if (power <= 0 || dt_seconds <= 0) return 0.0;
  const double c_rate = power / capacity;
  const double throughput = power * (dt_seconds / 3600.0) / capacity;
  return c.q_poly_at_temp * std::exp(c.q4 * c_rate) * throughput * ah_per_unit;
}

double calendar_step_cost(double soe, const BatterySpec& spec, double age_days, double dt_seconds,
                          const BatteryNpv& npv, const AgingModelOptions& options) {
  return cost_per_percent(npv, spec) *
         calendar_aging_step(soe, spec.temperature, age_days, dt_seconds, spec.aging, spec.capacity, options);
}

double CalendarLinearization::value(double soe) const {
  for (const auto& s : segments)
    if (soe <= s.hi) return s.value(soe);
  return segments.back().value(soe);
}

CalendarLinearization linearize_calendar(const BatterySpec& spec, double age_days, double dt_seconds,
                                         const BatteryNpv& npv, const AgingModelOptions& options) {
  CalendarLinearization lin;
  lin.age_days = age_days;
  lin.dt_seconds = dt_seconds;
  const double scale = cost_per_percent(npv, spec) * arrhenius_factor(spec.temperature, spec.aging, options) *
                       (std::sqrt(age_days + dt_seconds / kSecondsPerDay) - std::sqrt(age_days));
  const std::array<double, 3> quad = {spec.aging.a1, spec.aging.b1, spec.aging.c1};

  for (std::size_t k = 0; k < 3; ++k) {
    auto& seg = lin.segments[k];
    seg.lo = kSpanBreaks[k] * spec.capacity;
    seg.hi = kSpanBreaks[k + 1] * spec.capacity;
    // Evaluate this span's own quadratic at both ends, including the shared
    // breakpoint on the left.
    auto curve = [&](double soe) {
      const double soc = 100.0 * soe / spec.capacity;
      return scale * span_stress(k, soc, spec.aging);
    };
    const double at_lo = curve(seg.lo);
    const double at_hi = curve(seg.hi);
    seg.slope = (at_hi - at_lo) / (seg.hi - seg.lo);
    seg.intercept = at_lo - seg.slope * seg.lo;
    // A quadratic sags furthest from its secant at the span midpoint.
    const double width_pct = 100.0 * (seg.hi - seg.lo) / spec.capacity;
    seg.max_error = std::abs(scale * quad[k]) * width_pct * width_pct / 4.0;
  }
  return lin;
}

double cycle_cost_per_mwh(double power, const BatterySpec& spec, const BatteryNpv& npv) {
  // One hour at `power` moves `power` MWh.
  if (power <= 0) return 0.0;
  return cost_per_percent(npv, spec) *
         cycle_aging_step(power, 0.0, 3600.0, spec.aging, spec.capacity, spec.cycle_ah_per_unit) / power;
}

CycleLinearization linearize_cycle(const BatterySpec& spec, const BatteryNpv& npv, double tolerance, int samples) {
  if (samples < 2) throw std::invalid_argument("linearize_cycle: need at least two samples");
  CycleLinearization lin;
  lin.fit_lo = 0.1 * spec.p_max;
  lin.fit_hi = 1.0 * spec.p_max;
  lin.samples = samples;

  Eigen::ArrayXd power = Eigen::ArrayXd::LinSpaced(samples, lin.fit_lo, lin.fit_hi);
  Eigen::ArrayXd per_mwh = power.unaryExpr([&](double p) { return cycle_cost_per_mwh(p, spec, npv); });
  Eigen::ArrayXd hourly = per_mwh * power;
  // Line through the origin: minimize sum (k P - cost(P))^2.
  lin.k_cyc = (power * hourly).sum() / power.square().sum();

  const Eigen::ArrayXd rel = (lin.k_cyc - per_mwh).abs() / per_mwh;
  lin.max_relative_error = rel.maxCoeff();
  lin.relative_error_at_max = rel[samples - 1];
  lin.full_scale_error = ((lin.k_cyc * power - hourly).abs() / hourly[samples - 1]).maxCoeff();
  if (lin.full_scale_error > tolerance)
    throw FitToleranceExceeded(fmt::format("cycle linearization error {:.4f} exceeds tolerance {:.4f}",
                                           lin.full_scale_error, tolerance));
  return lin;
}

AgingTotals post_calculate_aging(const Eigen::Ref<const Eigen::ArrayXd>& soe,
                                 const Eigen::Ref<const Eigen::ArrayXd>& p_ch,
                                 const Eigen::Ref<const Eigen::ArrayXd>& p_ds, double dt_seconds,
                                 const BatterySpec& spec, double age_days, const BatteryNpv& npv,
                                 const AgingModelOptions& options) {
  if (soe.size() != p_ch.size() || soe.size() != p_ds.size())
    throw std::invalid_argument("post_calculate_aging: trajectory lengths differ");
  AgingTotals out;
  const double dt_days = dt_seconds / kSecondsPerDay;
  for (Eigen::Index t = 0; t < soe.size(); ++t) {
    out.calendar_pct += calendar_aging_step(soe[t], spec.temperature, age_days + static_cast<double>(t) * dt_days,
                                            dt_seconds, spec.aging, spec.capacity, options);
    out.cycle_pct += cycle_aging_step(p_ch[t], p_ds[t], dt_seconds, spec.aging, spec.capacity, spec.cycle_ah_per_unit);
  }
  const double eur = cost_per_percent(npv, spec);
  out.calendar_cost = eur * out.calendar_pct;
  out.cycle_cost = eur * out.cycle_pct;
  return out;
}

void write_linearization_csv(const std::filesystem::path& path, const CalendarLinearization& cal,
                             const CycleLinearization& cyc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << "span,lo,hi,slope,intercept,max_err\n";
  for (std::size_t k = 0; k < cal.segments.size(); ++k) {
    const auto& s = cal.segments[k];
    out << fmt::format("calendar{},{},{},{},{},{}\n", k, s.lo, s.hi, s.slope, s.intercept, s.max_error);
  }
  out << fmt::format("cycle,{},{},{},0,{}\n", cyc.fit_lo, cyc.fit_hi, cyc.k_cyc, cyc.max_relative_error);
}

}  // namespace fcr
