#include "fcr/day_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace fcr {

namespace {

std::string hname(const char* base, Index h) { return fmt::format("{}[h={}]", base, h); }
std::string tname(const char* base, Index t) { return fmt::format("{}[t={}]", base, t); }
std::string kname(const char* base, Index t, Index k) { return fmt::format("{}[t={},k={}]", base, t, k); }

struct HourCols {
  Index p_ch_bl, p_ds_bl, b_ch_bl, b_ds_bl, bid_n, bid_du, bid_dd, b_n, b_du, b_dd;
};

}  // namespace

ModelSize expected_model_size(const TimeGrid& grid, const BuildOptions& o) {
  const Index H = grid.hours;
  const Index n = grid.steps();
  const Index step_bin = o.relax_step_binaries ? 0 : 2;
  const Index deg = o.degradation_in_objective ? 1 : 0;
  const Index req_rows = o.enforce_requirements ? 12 : 0;  // 2 power + 10 endurance
  ModelSize s;
  s.variables = 10 * H + n * (3 + step_bin + 6 * deg) + 2 * deg;
  s.binaries = 5 * H + n * (step_bin + 3 * deg);
  s.constraints = (11 + req_rows) * H + n * (2 + (o.relax_step_binaries ? 0 : 5) + 8 * deg) + 2 * deg;
  return s;
}

MilpModel build_day_model(const DayInputs& in) {
  const auto& g = in.grid;
  const auto& spec = in.spec;
  const auto& o = in.options;
  const auto& c = in.contents;
  spec.validate();
  if (in.prices.hours() != g.hours || c.grid.steps() != g.steps())
    throw std::invalid_argument("build_day_model: prices/contents do not cover the day");
  const double s_lo = spec.soe_min();
  const double s_hi = spec.soe_max();
  if (!(in.s0 >= s_lo - 1e-12 && in.s0 <= s_hi + 1e-12))
    throw InfeasibleBounds(fmt::format("initial SoE {} outside [{}, {}]", in.s0, s_lo, s_hi));
  if (o.relax_step_binaries && spec.p_min > 0)
    throw std::invalid_argument("relax_step_binaries requires p_min == 0");

  const double p_max = spec.p_max;
  const double p_min = spec.p_min;
  const double dt = g.step_hours();
  const double tax_credit = o.da_revenue_includes_tax ? in.prices.tax : 0.0;
  const bool deg = o.degradation_in_objective;

  MilpModel m;
  std::vector<HourCols> hc(static_cast<std::size_t>(g.hours));

  for (Index h = 0; h < g.hours; ++h) {
    auto& k = hc[static_cast<std::size_t>(h)];
    k.p_ch_bl = m.add_variable(hname("p_ch_bl", h), 0.0, p_max);
    k.p_ds_bl = m.add_variable(hname("p_ds_bl", h), 0.0, p_max);
    k.b_ch_bl = m.add_binary(hname("b_ch_bl", h));
    k.b_ds_bl = m.add_binary(hname("b_ds_bl", h));
    k.bid_n = m.add_variable(hname("bid_n", h), 0.0, p_max);
    k.bid_du = m.add_variable(hname("bid_du", h), 0.0, 2 * p_max);
    k.bid_dd = m.add_variable(hname("bid_dd", h), 0.0, 2 * p_max);
    k.b_n = m.add_binary(hname("b_n", h));
    k.b_du = m.add_binary(hname("b_du", h));
    k.b_dd = m.add_binary(hname("b_dd", h));

    if (!allows_n(in.market_case)) m.fix(k.bid_n, 0.0), m.fix(k.b_n, 0.0);
    if (!allows_du(in.market_case)) m.fix(k.bid_du, 0.0), m.fix(k.b_du, 0.0);
    if (!allows_dd(in.market_case)) m.fix(k.bid_dd, 0.0), m.fix(k.b_dd, 0.0);
    if (o.force_zero_baseline) {
      for (Index col : {k.p_ch_bl, k.p_ds_bl, k.b_ch_bl, k.b_ds_bl}) m.fix(col, 0.0);
    }

    const auto& pr = in.prices;
    m.set_objective(k.p_ds_bl, pr.spot[h] + tax_credit);
    m.set_objective(k.p_ch_bl, -(pr.spot[h] + pr.grid_tariff + pr.tax));
    m.set_objective(k.bid_n, pr.fcr_n[h] + pr.up_reg[h] * c.hour_ur_n[h] - pr.down_reg[h] * c.hour_dr_n[h]);
    m.set_objective(k.bid_du, pr.fcr_du[h]);
    m.set_objective(k.bid_dd, pr.fcr_dd[h]);
  }

  std::vector<Index> p_ch(static_cast<std::size_t>(g.steps())), p_ds(p_ch.size()), soe(p_ch.size());
  std::vector<Index> b_ch(p_ch.size(), -1), b_ds(p_ch.size(), -1);
  for (Index t = 0; t < g.steps(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    p_ch[i] = m.add_variable(tname("p_ch", t), 0.0, p_max);
    p_ds[i] = m.add_variable(tname("p_ds", t), 0.0, p_max);
    if (!o.relax_step_binaries) {
      b_ch[i] = m.add_binary(tname("b_ch", t));
      b_ds[i] = m.add_binary(tname("b_ds", t));
    }
    soe[i] = m.add_variable(tname("soe", t), s_lo, s_hi);
  }

  // Hourly rows.
  for (Index h = 0; h < g.hours; ++h) {
    const auto& k = hc[static_cast<std::size_t>(h)];
    using F = RowFamily;
    m.add_constraint(hname("bl_ch_lo", h), {{k.p_ch_bl, 1}, {k.b_ch_bl, -p_min}}, Sense::GreaterEqual, 0, F::BaselineBounds);
    m.add_constraint(hname("bl_ch_hi", h), {{k.p_ch_bl, 1}, {k.b_ch_bl, -p_max}}, Sense::LessEqual, 0, F::BaselineBounds);
    m.add_constraint(hname("bl_ds_lo", h), {{k.p_ds_bl, 1}, {k.b_ds_bl, -p_min}}, Sense::GreaterEqual, 0, F::BaselineBounds);
    m.add_constraint(hname("bl_ds_hi", h), {{k.p_ds_bl, 1}, {k.b_ds_bl, -p_max}}, Sense::LessEqual, 0, F::BaselineBounds);
    m.add_constraint(hname("bl_excl", h), {{k.b_ch_bl, 1}, {k.b_ds_bl, 1}}, Sense::LessEqual, 1, F::Exclusivity);

    m.add_constraint(hname("bid_n_lo", h), {{k.bid_n, 1}, {k.b_n, -spec.min_bid_n}}, Sense::GreaterEqual, 0, F::BidBounds);
    m.add_constraint(hname("bid_n_hi", h), {{k.bid_n, 1}, {k.b_n, -p_max}}, Sense::LessEqual, 0, F::BidBounds);
    m.add_constraint(hname("bid_du_lo", h), {{k.bid_du, 1}, {k.b_du, -spec.min_bid_du}}, Sense::GreaterEqual, 0, F::BidBounds);
    m.add_constraint(hname("bid_du_hi", h), {{k.bid_du, 1}, {k.b_du, -2 * p_max}}, Sense::LessEqual, 0, F::BidBounds);
    m.add_constraint(hname("bid_dd_lo", h), {{k.bid_dd, 1}, {k.b_dd, -spec.min_bid_dd}}, Sense::GreaterEqual, 0, F::BidBounds);
    m.add_constraint(hname("bid_dd_hi", h), {{k.bid_dd, 1}, {k.b_dd, -2 * p_max}}, Sense::LessEqual, 0, F::BidBounds);

    if (!o.enforce_requirements) continue;

    // Upward capability is p_max plus the charging baseline, downward is
    // p_max minus it (load convention).
    m.add_constraint(hname("req_up", h),
                     {{k.bid_n, kFcrNPowerFactor}, {k.bid_du, 1}, {k.bid_dd, kFcrDOppositeFactor}, {k.p_ch_bl, -1}, {k.p_ds_bl, 1}},
                     Sense::LessEqual, p_max, F::PowerRequirement);
    m.add_constraint(hname("req_dn", h),
                     {{k.bid_n, kFcrNPowerFactor}, {k.bid_dd, 1}, {k.bid_du, kFcrDOppositeFactor}, {k.p_ch_bl, 1}, {k.p_ds_bl, -1}},
                     Sense::LessEqual, p_max, F::PowerRequirement);

    // Worst-case SoE scenarios from the hour-start SoE.
    const bool first = h == 0;
    const double start_const = first ? in.s0 : 0.0;
    auto endurance = [&](const char* tag, double w_bl, double w_n, double w_du, double w_dd) {
      std::vector<Term> terms;
      if (!first) terms.push_back({soe[static_cast<std::size_t>(g.first_step(h) - 1)], 1.0});
      terms.push_back({k.p_ch_bl, w_bl});
      terms.push_back({k.p_ds_bl, -w_bl});
      if (w_n != 0) terms.push_back({k.bid_n, w_n});
      if (w_du != 0) terms.push_back({k.bid_du, w_du});
      if (w_dd != 0) terms.push_back({k.bid_dd, w_dd});
      m.add_constraint(hname((std::string(tag) + "_lo").c_str(), h), terms, Sense::GreaterEqual, s_lo - start_const,
                       F::Endurance);
      m.add_constraint(hname((std::string(tag) + "_hi").c_str(), h), std::move(terms), Sense::LessEqual,
                       s_hi - start_const, F::Endurance);
    };
    const double third = kFcrDEnduranceHours;
    endurance("end_locked", 1.0, 0, 0, 0);
    endurance("end_20min_dn", third, third, 0, third);
    endurance("end_20min_up", third, -third, -third, 0);
    endurance("end_hour_dn", 1.0, 1.0, 0, third);
    endurance("end_hour_up", 1.0, -1.0, -third, 0);
  }

  // Step rows.
  const double eta_ch = spec.eta_ch;
  const double eta_ds = spec.eta_ds;
  for (Index t = 0; t < g.steps(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    const auto& k = hc[static_cast<std::size_t>(g.hour_of_step(t))];
    using F = RowFamily;
    if (!o.relax_step_binaries) {
      m.add_constraint(tname("p_ch_lo", t), {{p_ch[i], 1}, {b_ch[i], -p_min}}, Sense::GreaterEqual, 0, F::StepPowerBounds);
      m.add_constraint(tname("p_ch_hi", t), {{p_ch[i], 1}, {b_ch[i], -p_max}}, Sense::LessEqual, 0, F::StepPowerBounds);
      m.add_constraint(tname("p_ds_lo", t), {{p_ds[i], 1}, {b_ds[i], -p_min}}, Sense::GreaterEqual, 0, F::StepPowerBounds);
      m.add_constraint(tname("p_ds_hi", t), {{p_ds[i], 1}, {b_ds[i], -p_max}}, Sense::LessEqual, 0, F::StepPowerBounds);
      m.add_constraint(tname("p_excl", t), {{b_ch[i], 1}, {b_ds[i], 1}}, Sense::LessEqual, 1, F::Exclusivity);
    }

    // SoE recursion: baseline flows carry efficiencies, activation energy
    // enters per unit of bid.
    double w_n = c.e_dr_n[t] - c.e_ur_n[t];
    double w_dd = c.e_dr_dd[t];
    double w_du = c.e_ur_du[t];
    if (o.efficiency_on_activation) {
      w_n = eta_ch * c.e_dr_n[t] - c.e_ur_n[t] / eta_ds;
      w_dd = eta_ch * c.e_dr_dd[t];
      w_du = c.e_ur_du[t] / eta_ds;
    }
    std::vector<Term> soe_terms = {{soe[i], 1.0}};
    if (t > 0) soe_terms.push_back({soe[i - 1], -1.0});
    soe_terms.push_back({k.p_ch_bl, -eta_ch * dt});
    soe_terms.push_back({k.p_ds_bl, dt / eta_ds});
    if (w_n != 0) soe_terms.push_back({k.bid_n, -w_n});
    if (w_dd != 0) soe_terms.push_back({k.bid_dd, -w_dd});
    if (w_du != 0) soe_terms.push_back({k.bid_du, w_du});
    m.add_constraint(tname("soe", t), std::move(soe_terms), Sense::Equal, t == 0 ? in.s0 : 0.0, F::SoE);

    // Realized deviation from the baseline equals the droop activation.
    std::vector<Term> droop = {{p_ch[i], 1}, {p_ds[i], -1}, {k.p_ch_bl, -1}, {k.p_ds_bl, 1}};
    if (c.frac_n[t] != 0) droop.push_back({k.bid_n, -c.frac_n[t]});
    if (c.frac_dd[t] != 0) droop.push_back({k.bid_dd, -c.frac_dd[t]});
    if (c.frac_du[t] != 0) droop.push_back({k.bid_du, c.frac_du[t]});
    m.add_constraint(tname("droop", t), std::move(droop), Sense::Equal, 0.0, F::DroopCoupling);
  }

  if (deg) {
    std::vector<Term> cal_def, cyc_def;
    for (Index t = 0; t < g.steps(); ++t) {
      const auto i = static_cast<std::size_t>(t);
      std::array<Index, 3> z{}, s{};
      for (Index span = 0; span < 3; ++span) {
        const auto& seg = in.cal_lin.segments[static_cast<std::size_t>(span)];
        z[static_cast<std::size_t>(span)] = m.add_binary(kname("cal_z", t, span));
        s[static_cast<std::size_t>(span)] = m.add_variable(kname("cal_s", t, span), 0.0, seg.hi);
      }
      using F = RowFamily;
      m.add_constraint(tname("cal_pick", t), {{z[0], 1}, {z[1], 1}, {z[2], 1}}, Sense::Equal, 1, F::Degradation);
      m.add_constraint(tname("cal_sum", t), {{s[0], 1}, {s[1], 1}, {s[2], 1}, {soe[i], -1}}, Sense::Equal, 0, F::Degradation);
      for (Index span = 0; span < 3; ++span) {
        const auto j = static_cast<std::size_t>(span);
        const auto& seg = in.cal_lin.segments[j];
        m.add_constraint(kname("cal_lo", t, span), {{s[j], 1}, {z[j], -seg.lo}}, Sense::GreaterEqual, 0, F::Degradation);
        m.add_constraint(kname("cal_hi", t, span), {{s[j], 1}, {z[j], -seg.hi}}, Sense::LessEqual, 0, F::Degradation);
        cal_def.push_back({s[j], -seg.slope});
        cal_def.push_back({z[j], -seg.intercept});
      }
      cyc_def.push_back({p_ch[i], -in.cyc_lin.k_cyc * dt});
      cyc_def.push_back({p_ds[i], -in.cyc_lin.k_cyc * dt});
    }
    const Index deg_cal = m.add_variable("deg_cal", -kInf, kInf);
    const Index deg_cyc = m.add_variable("deg_cyc", -kInf, kInf);
    cal_def.push_back({deg_cal, 1.0});
    cyc_def.push_back({deg_cyc, 1.0});
    m.add_constraint("deg_cal_def", std::move(cal_def), Sense::Equal, 0.0, RowFamily::Degradation);
    m.add_constraint("deg_cyc_def", std::move(cyc_def), Sense::Equal, 0.0, RowFamily::Degradation);
    m.set_objective(deg_cal, -1.0);
    m.set_objective(deg_cyc, -1.0);
  }
  return m;
}

DaySolution extract_day_solution(const MilpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x, const DayInputs& in) {
  const auto& g = in.grid;
  DaySolution s;
  s.day_index = g.day_index;
  s.grid = g;
  s.s0 = in.s0;
  auto hourly = [&](const char* base) {
    Eigen::ArrayXd out(g.hours);
    for (Index h = 0; h < g.hours; ++h) out[h] = x[m.col(hname(base, h))];
    return out;
  };
  s.p_ch_bl = hourly("p_ch_bl");
  s.p_ds_bl = hourly("p_ds_bl");
  s.bid_n = hourly("bid_n");
  s.bid_du = hourly("bid_du");
  s.bid_dd = hourly("bid_dd");

  s.p_ch.resize(g.steps());
  s.p_ds.resize(g.steps());
  s.soe.resize(g.steps());
  for (Index t = 0; t < g.steps(); ++t) {
    const double net = x[m.col(tname("p_ch", t))] - x[m.col(tname("p_ds", t))];
    s.p_ch[t] = std::max(net, 0.0);
    s.p_ds[t] = std::max(-net, 0.0);
    s.soe[t] = x[m.col(tname("soe", t))];
  }

  const auto rev = evaluate_revenue(s, in);
  s.r_da = rev.r_da;
  s.r_n = rev.r_n;
  s.r_du = rev.r_du;
  s.r_dd = rev.r_dd;
  s.c_da = rev.c_da;
  if (m.has("deg_cal")) {
    s.c_deg_cal_lin = x[m.col("deg_cal")];
    s.c_deg_cyc_lin = x[m.col("deg_cyc")];
  }
  s.objective = m.evaluate_objective(x);
  return s;
}

RevenueBreakdown evaluate_revenue(const DaySolution& s, const DayInputs& in) {
  const auto& p = in.prices;
  const auto& c = in.contents;
  const double tax_credit = in.options.da_revenue_includes_tax ? p.tax : 0.0;
  RevenueBreakdown r;
  for (Index h = 0; h < in.grid.hours; ++h) {
    r.r_da += s.p_ds_bl[h] * (p.spot[h] + tax_credit);
    r.c_da += s.p_ch_bl[h] * (p.spot[h] + p.grid_tariff + p.tax);
    r.r_n += s.bid_n[h] * (p.fcr_n[h] + p.up_reg[h] * c.hour_ur_n[h] - p.down_reg[h] * c.hour_dr_n[h]);
    r.r_du += p.fcr_du[h] * s.bid_du[h];
    r.r_dd += p.fcr_dd[h] * s.bid_dd[h];
  }
  return r;
}

Eigen::VectorXd pack_day_solution(const MilpModel& m, const DaySolution& s, const DayInputs& in) {
  const auto& g = in.grid;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m.num_variables());
  auto set = [&](const std::string& name, double v) { x[m.col(name)] = v; };
  for (Index h = 0; h < g.hours; ++h) {
    set(hname("p_ch_bl", h), s.p_ch_bl[h]);
    set(hname("p_ds_bl", h), s.p_ds_bl[h]);
    set(hname("b_ch_bl", h), s.p_ch_bl[h] > 0 ? 1.0 : 0.0);
    set(hname("b_ds_bl", h), s.p_ds_bl[h] > 0 ? 1.0 : 0.0);
    set(hname("bid_n", h), s.bid_n[h]);
    set(hname("bid_du", h), s.bid_du[h]);
    set(hname("bid_dd", h), s.bid_dd[h]);
    set(hname("b_n", h), s.bid_n[h] > 0 ? 1.0 : 0.0);
    set(hname("b_du", h), s.bid_du[h] > 0 ? 1.0 : 0.0);
    set(hname("b_dd", h), s.bid_dd[h] > 0 ? 1.0 : 0.0);
  }
  const bool deg = m.has("deg_cal");
  double cal = 0.0, cyc = 0.0;
  for (Index t = 0; t < g.steps(); ++t) {
    set(tname("p_ch", t), s.p_ch[t]);
    set(tname("p_ds", t), s.p_ds[t]);
    set(tname("soe", t), s.soe[t]);
    if (m.has(tname("b_ch", t))) {
      set(tname("b_ch", t), s.p_ch[t] > 0 ? 1.0 : 0.0);
      set(tname("b_ds", t), s.p_ds[t] > 0 ? 1.0 : 0.0);
    }
    if (!deg) continue;
    Index owner = 2;
    for (Index k = 0; k < 3; ++k)
      if (s.soe[t] <= in.cal_lin.segments[static_cast<std::size_t>(k)].hi) {
        owner = k;
        break;
      }
    const auto& seg = in.cal_lin.segments[static_cast<std::size_t>(owner)];
    set(kname("cal_z", t, owner), 1.0);
    set(kname("cal_s", t, owner), s.soe[t]);
    cal += seg.slope * s.soe[t] + seg.intercept;
    cyc += in.cyc_lin.k_cyc * g.step_hours() * (s.p_ch[t] + s.p_ds[t]);
  }
  if (deg) {
    set("deg_cal", cal);
    set("deg_cyc", cyc);
  }
  return x;
}

}  // namespace fcr
