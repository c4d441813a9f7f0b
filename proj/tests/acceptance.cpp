// Acceptance suite: one line per criterion, PASS / FAIL / SKIP.
//   acceptance            run everything
//   acceptance --only ID  run one criterion (ctest registers each ID)
//   acceptance --list

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fcr/orchestrator.hpp"
#include "oracle_values.hpp"

using namespace fcr;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }
Outcome judge(bool ok, std::string d) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(d)}; }

constexpr double kAuditTol = 1e-6;

RunConfig synthetic_config(std::uint64_t seed, Index days, Index steps_per_hour) {
  auto c = parse_config(fmt::format("synthetic_seed = {}\ndays = {}\nsteps_per_hour = {}\n", seed, days, steps_per_hour));
  c.validate();
  return c;
}

// ------------------------------------------------------------ audits

// Activation energy of one step from the bids, as the SoE balance prints it.
double step_flow(const DaySolution& d, const DayInputs& in, Index t) {
  const auto h = in.grid.hour_of_step(t);
  const auto& c = in.contents;
  const double dt = in.grid.step_hours();
  double flow = (d.p_ch_bl[h] * in.spec.eta_ch - d.p_ds_bl[h] / in.spec.eta_ds) * dt;
  if (in.options.efficiency_on_activation) {
    flow += d.bid_n[h] * (in.spec.eta_ch * c.e_dr_n[t] - c.e_ur_n[t] / in.spec.eta_ds) +
            d.bid_dd[h] * in.spec.eta_ch * c.e_dr_dd[t] - d.bid_du[h] * c.e_ur_du[t] / in.spec.eta_ds;
  } else {
    flow += d.bid_n[h] * (c.e_dr_n[t] - c.e_ur_n[t]) + d.bid_dd[h] * c.e_dr_dd[t] - d.bid_du[h] * c.e_ur_du[t];
  }
  return flow;
}

// |S_final - s0 - sum of flows|.
double telescoping_error(const DaySolution& d, const DayInputs& in) {
  double sum = 0;
  for (Index t = 0; t < in.grid.steps(); ++t) sum += step_flow(d, in, t);
  return std::abs(d.final_soe() - d.s0 - sum);
}

// Worst violation of the power and endurance requirements, recomputed from
// the extracted schedule.
double requirement_violation(const DaySolution& d, const BatterySpec& b, std::string* where) {
  double worst = 0;
  const auto note = [&](double v, const char* what, Index h) {
    if (v > worst) {
      worst = v;
      if (where) *where = fmt::format("{} h={}", what, h);
    }
  };
  const double lo = b.soe_min(), hi = b.soe_max();
  for (Index h = 0; h < d.grid.hours; ++h) {
    const double n = d.bid_n[h], du = d.bid_du[h], dd = d.bid_dd[h], bl = d.baseline(h), s = d.hour_start_soe(h);
    note(1.34 * n + du + 0.2 * dd - (b.p_max + bl), "power up", h);
    note(1.34 * n + dd + 0.2 * du - (b.p_max - bl), "power down", h);
    const auto band = [&](double v, const char* what) {
      note(lo - v, what, h);
      note(v - hi, what, h);
    };
    band(s + bl, "locked baseline");
    band(s + (bl + n + dd) / 3.0, "20 min down");
    band(s + (bl - n - du) / 3.0, "20 min up");
    band(s + bl + n + dd / 3.0, "full hour down");
    band(s + bl - n - du / 3.0, "full hour up");
  }
  return worst;
}

// ------------------------------------------------------------- criteria

Outcome droop_correctness() {
  struct Row {
    double f, n, du, dd;
  };
  // Hand-evaluated piecewise curves, every breakpoint included.
  const Row rows[] = {
      {49.00, -1, 1, 0},      {49.30, -1, 1, 0},     {49.40, -1, 1, 0},       {49.50, -1, 1, 0},
      {49.60, -1, 0.75, 0},   {49.70, -1, 0.5, 0},   {49.80, -1, 0.25, 0},    {49.85, -1, 0.125, 0},
      {49.90, -1, 0, 0},      {49.95, -0.5, 0, 0},   {49.99, -0.1, 0, 0},     {50.00, 0, 0, 0},
      {50.02, 0.2, 0, 0},     {50.05, 0.5, 0, 0},    {50.10, 1, 0, 0},        {50.20, 1, 0, 0.25},
      {50.30, 1, 0, 0.5},     {50.40, 1, 0, 0.75},   {50.50, 1, 0, 1},        {50.60, 1, 0, 1},
  };
  const DroopParams p;
  double worst = 0;
  double at = 0;
  for (const auto& r : rows) {
    const double e = std::max({std::abs(fcrn_fraction(r.f, p) - r.n), std::abs(fcrd_up_fraction(r.f, p) - r.du),
                               std::abs(fcrd_down_fraction(r.f, p) - r.dd)});
    if (e > worst) {
      worst = e;
      at = r.f;
    }
  }
  return judge(worst <= 1e-12, fmt::format("20 frequencies, worst abs error {:.3g} (at {} Hz), tol 1e-12", worst, at));
}

Outcome energy_conservation() {
  std::mt19937_64 rng(2024);
  Index traces = 0, bad_sum = 0, bad_range = 0;
  const Index layouts[] = {60, 12, 4, 1};
  for (int k = 0; k < 120; ++k) {
    const Index sph = layouts[k % 4];
    const Horizon hz{0, 1, sph, 24};
    Eigen::ArrayXd f;
    if (k % 2 == 0) {
      SynthFrequencyParams sp;
      sp.volatility = 0.002 + 0.02 * std::uniform_real_distribution<double>(0, 1)(rng);
      f = synth_frequency(rng(), hz, sp).hz;
    } else {
      std::uniform_real_distribution<double> u(49.2, 50.8);
      f.resize(hz.steps_per_day());
      for (Index t = 0; t < f.size(); ++t) f[t] = u(rng);
    }
    const auto grid = hz.day(0);
    const auto c = energy_content(f, grid);
    ++traces;
    for (Index h = 0; h < grid.hours; ++h) {
      double ur_n = 0, dr_n = 0, ur_du = 0, dr_dd = 0;
      for (Index t = grid.first_step(h); t < grid.first_step(h + 1); ++t) {
        ur_n += c.e_ur_n[t];
        dr_n += c.e_dr_n[t];
        ur_du += c.e_ur_du[t];
        dr_dd += c.e_dr_dd[t];
      }
      if (ur_n != c.hour_ur_n[h] || dr_n != c.hour_dr_n[h] || ur_du != c.hour_ur_du[h] || dr_dd != c.hour_dr_dd[h])
        ++bad_sum;
      for (double e : {c.hour_ur_n[h], c.hour_dr_n[h]})
        if (!(e >= 0.0 && e <= 1.0)) ++bad_range;
    }
  }
  return judge(bad_sum == 0 && bad_range == 0,
               fmt::format("{} traces: {} inexact hourly sums, {} hourly FCR-N contents outside [0, 1] h", traces,
                           bad_sum, bad_range));
}

// A small case/mode matrix on synthetic data, shared by the audits.
struct SolvedDay {
  std::string label;
  DayInputs inputs;
  DaySolution solution;
};

std::vector<SolvedDay> solve_matrix(std::uint64_t seed, Index days, Index sph) {
  const auto cfg = synthetic_config(seed, days, sph);
  const auto data = load_scenario(cfg);
  const ExternalSolver solver;
  std::vector<SolvedDay> out;
  for (auto mc : kAllCases) {
    for (bool deg : {true, false}) {
      double s0 = cfg.s0();
      for (Index d = 0; d < days; ++d) {
        auto in = make_day_inputs(cfg, data, d, s0, mc, deg);
        auto sol = solve_day(in, solver, cfg.limits, cfg);
        s0 = sol.final_soe();
        out.push_back({fmt::format("seed {} {} {} day {}", seed, to_string(mc), deg ? "with-deg" : "no-deg", d),
                       std::move(in), std::move(sol)});
      }
    }
  }
  return out;
}

Outcome soe_telescoping() {
  const auto days = solve_matrix(11, 2, 4);
  double worst = 0;
  std::string where;
  for (const auto& s : days) {
    const double e = telescoping_error(s.solution, s.inputs);
    if (e > worst) {
      worst = e;
      where = s.label;
    }
  }
  return judge(worst <= 1e-9, fmt::format("{} solved days, worst |S_final - s0 - sum of flows| = {:.3g} MWh{}, tol 1e-9",
                                          days.size(), worst, where.empty() ? "" : " (" + where + ")"));
}

Outcome requirement_audit() {
  Index n = 0;
  double worst = 0;
  std::string where;
  for (std::uint64_t seed : {1, 2}) {
    for (const auto& s : solve_matrix(seed, 2, 4)) {
      ++n;
      std::string w;
      const double v = requirement_violation(s.solution, s.inputs.spec, &w);
      if (v > worst) {
        worst = v;
        where = s.label + ", " + w;
      }
    }
  }
  return judge(worst <= kAuditTol, fmt::format("{} days over 5 cases x 2 modes x 2 seeds, worst violation {:.3g}{}, tol 1e-6",
                                               n, worst, where.empty() ? "" : " (" + where + ")"));
}

// ------------------------------------------------ brute force on a toy day

struct HourChoice {
  double value;
  double bl, n, du, dd;
};

// Exhaustive search over 0.1 MW grids of baseline and bids. Candidates per
// hour are sorted by value, so a branch stops as soon as the current value
// plus the best possible remainder cannot beat the incumbent.
struct BruteForce {
  const DayInputs& in;
  double tol = 1e-9;
  std::vector<std::vector<HourChoice>> cand;
  std::vector<double> best_rest;  // sum of per-hour maxima from h on
  double best = -kInf;
  std::vector<HourChoice> path, best_path;
  long visited = 0;

  explicit BruteForce(const DayInputs& inputs) : in(inputs) {
    const auto& b = in.spec;
    const auto& p = in.prices;
    const auto& c = in.contents;
    const double step = 0.1;
    const auto grid = [&](double hi) {
      std::vector<double> v;
      for (int k = 0; k * step <= hi + 1e-12; ++k) v.push_back(k / 10.0);
      return v;
    };
    const bool n_ok = allows_n(in.market_case), du_ok = allows_du(in.market_case), dd_ok = allows_dd(in.market_case);
    for (Index h = 0; h < in.grid.hours; ++h) {
      std::vector<HourChoice> list;
      const double tax_credit = in.options.da_revenue_includes_tax ? p.tax : 0.0;
      for (int kb = -10; kb <= 10; ++kb) {
        const double bl = kb / 10.0 * b.p_max;
        const double da = bl >= 0 ? -bl * (p.spot[h] + p.grid_tariff + p.tax) : -bl * (p.spot[h] + tax_credit);
        for (double n : n_ok ? grid(b.p_max) : std::vector<double>{0.0}) {
          if (n > 0 && n < b.min_bid_n - tol) continue;
          for (double du : du_ok ? grid(2 * b.p_max) : std::vector<double>{0.0}) {
            if (du > 0 && du < b.min_bid_du - tol) continue;
            for (double dd : dd_ok ? grid(2 * b.p_max) : std::vector<double>{0.0}) {
              if (dd > 0 && dd < b.min_bid_dd - tol) continue;
              if (1.34 * n + du + 0.2 * dd > b.p_max + bl + tol) continue;
              if (1.34 * n + dd + 0.2 * du > b.p_max - bl + tol) continue;
              const double v = da + n * (p.fcr_n[h] + p.up_reg[h] * c.hour_ur_n[h] - p.down_reg[h] * c.hour_dr_n[h]) +
                               du * p.fcr_du[h] + dd * p.fcr_dd[h];
              list.push_back({v, bl, n, du, dd});
            }
          }
        }
      }
      std::stable_sort(list.begin(), list.end(), [](const HourChoice& a, const HourChoice& b) { return a.value > b.value; });
      cand.push_back(std::move(list));
    }
    best_rest.assign(cand.size() + 1, 0.0);
    for (std::size_t h = cand.size(); h-- > 0;) best_rest[h] = best_rest[h + 1] + cand[h].front().value;
  }

  // SoE after the hour, or NaN when a step or endurance bound breaks.
  double advance(Index h, double s, const HourChoice& x) const {
    const auto& b = in.spec;
    const double lo = b.soe_min() - tol, hi = b.soe_max() + tol;
    const auto inside = [&](double v) { return v >= lo && v <= hi; };
    if (!inside(s + x.bl) || !inside(s + (x.bl + x.n + x.dd) / 3.0) || !inside(s + (x.bl - x.n - x.du) / 3.0) ||
        !inside(s + x.bl + x.n + x.dd / 3.0) || !inside(s + x.bl - x.n - x.du / 3.0))
      return std::nan("");
    const auto& c = in.contents;
    const double dt = in.grid.step_hours();
    const double ch = std::max(x.bl, 0.0), ds = std::max(-x.bl, 0.0);
    for (Index t = in.grid.first_step(h); t < in.grid.first_step(h + 1); ++t) {
      const double dp = x.bl + c.frac_n[t] * x.n + c.frac_dd[t] * x.dd - c.frac_du[t] * x.du;
      if (std::abs(dp) > b.p_max + tol) return std::nan("");
      s += (ch * b.eta_ch - ds / b.eta_ds) * dt + x.n * (c.e_dr_n[t] - c.e_ur_n[t]) + x.dd * c.e_dr_dd[t] -
           x.du * c.e_ur_du[t];
      if (!inside(s)) return std::nan("");
    }
    return s;
  }

  void search(std::size_t h, double s, double value) {
    if (h == cand.size()) {
      if (value > best) {
        best = value;
        best_path = path;
      }
      return;
    }
    for (const auto& x : cand[h]) {
      if (value + x.value + best_rest[h + 1] <= best) break;
      ++visited;
      const double next = advance(static_cast<Index>(h), s, x);
      if (std::isnan(next)) continue;
      path.push_back(x);
      search(h + 1, next, value + x.value);
      path.pop_back();
    }
  }

  // Value gained by moving every decision by one grid step.
  double discretization_bound() const {
    const auto& p = in.prices;
    const auto& c = in.contents;
    double bound = 0;
    for (Index h = 0; h < in.grid.hours; ++h) {
      const double bl = std::max(std::abs(p.spot[h] + p.grid_tariff + p.tax), std::abs(p.spot[h] + p.tax));
      const double n = std::abs(p.fcr_n[h] + p.up_reg[h] * c.hour_ur_n[h] - p.down_reg[h] * c.hour_dr_n[h]);
      bound += 0.1 * (bl + n + std::abs(p.fcr_du[h]) + std::abs(p.fcr_dd[h]));
    }
    return bound;
  }
};

DayInputs toy_day(std::uint64_t seed) {
  const Horizon hz{0, 1, 4, 4};
  BatterySpec spec;
  const auto npv = battery_npv(spec);
  const auto grid = hz.day(0);
  DayInputs in{grid,
               synth_prices(seed, 4),
               energy_content(synth_frequency(seed, hz).hz, grid),
               spec,
               linearize_calendar(spec, 0.5, static_cast<double>(grid.step_seconds()), npv),
               linearize_cycle(spec, npv),
               0.5 * spec.capacity,
               MarketCase::MULTI,
               {}};
  in.options.degradation_in_objective = false;
  in.options.relax_step_binaries = true;
  return in;
}

Outcome oracle_equivalence() {
  SolveLimits lim;
  lim.gap = 1e-9;
  lim.time_limit = 120;
  std::vector<std::string> notes;
  bool ok = true;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto in = toy_day(seed);
    const auto model = build_day_model(in);
    const auto ext = solve_external(model, default_solver_command(), lim);
    const auto mic = solve_micro(model, lim);
    BruteForce bf(in);
    bf.search(0, in.s0, 0.0);
    if (ext.status != SolveStatus::Optimal || mic.status != SolveStatus::Optimal || !std::isfinite(bf.best)) {
      ok = false;
      notes.push_back(fmt::format("seed {}: external {}, micro {}, brute {}", seed, to_string(ext.status),
                                  to_string(mic.status), bf.best));
      continue;
    }
    const double rel = std::abs(ext.objective - mic.objective) / std::max(1.0, std::abs(ext.objective));
    const double bound = bf.discretization_bound();
    const bool this_ok = rel <= 1e-6 && ext.objective >= bf.best - 1e-6 && ext.objective <= bf.best + bound;
    ok = ok && this_ok;
    notes.push_back(fmt::format("seed {}: milp {:.4f}, micro rel diff {:.2g}, brute {:.4f} (+{:.2f} bound, {} candidate hours checked)",
                                seed, ext.objective, rel, bf.best, bound, bf.visited));
  }
  std::string d = fmt::format("4 h toy day, 15 min steps, {} binaries", build_day_model(toy_day(1)).num_binaries());
  for (const auto& n : notes) d += "; " + n;
  return judge(ok, d);
}

Outcome feasible_set_inclusion() {
  SolveLimits lim;
  lim.gap = 1e-9;
  lim.time_limit = 600;
  const ExternalSolver solver;
  bool ok = true;
  double worst_case = -kInf, worst_deg = -kInf;
  Index solves = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto cfg = synthetic_config(seed, 1, 4);
    const auto data = load_scenario(cfg);
    std::array<std::array<double, 2>, 5> obj{};
    std::array<std::array<double, 2>, 5> gap{};
    for (std::size_t k = 0; k < kAllCases.size(); ++k) {
      for (int deg = 0; deg < 2; ++deg) {
        const auto in = make_day_inputs(cfg, data, 0, cfg.s0(), kAllCases[k], deg == 1);
        const auto sol = solve_day(in, solver, lim, cfg);
        obj[k][static_cast<std::size_t>(deg)] = sol.objective;
        gap[k][static_cast<std::size_t>(deg)] = sol.stats.gap * std::abs(sol.objective);
        ++solves;
      }
    }
    const std::size_t multi = 4;
    for (int deg = 0; deg < 2; ++deg) {
      const auto i = static_cast<std::size_t>(deg);
      for (std::size_t k = 0; k < multi; ++k) {
        const double shortfall = obj[k][i] - obj[multi][i];
        worst_case = std::max(worst_case, shortfall);
        if (shortfall > 1e-6 + gap[multi][i]) ok = false;
      }
    }
    for (std::size_t k = 0; k < kAllCases.size(); ++k) {
      const double shortfall = obj[k][1] - obj[k][0];
      worst_deg = std::max(worst_deg, shortfall);
      if (shortfall > 1e-6 + gap[k][0]) ok = false;
    }
  }
  return judge(ok, fmt::format("{} day solves over 3 synthetic datasets: max(single - MULTI) = {:.3g} EUR, "
                               "max(with-deg - no-deg objective) = {:.3g} EUR, tol 1e-6 plus reported MIP gap",
                               solves, worst_case, worst_deg));
}

Outcome fcrn_endurance_cap() {
  auto cfg = synthetic_config(5, 1, 4);
  cfg.build.force_zero_baseline = true;
  cfg.initial_soe = 0.5;
  const auto data = load_scenario(cfg);
  const auto in = make_day_inputs(cfg, data, 0, cfg.s0(), MarketCase::FCR_N, true);
  const auto sol = solve_day(in, ExternalSolver{}, cfg.limits, cfg);
  const auto& b = cfg.battery;
  double worst = -kInf;
  for (Index h = 0; h < sol.grid.hours; ++h) {
    const double s = sol.hour_start_soe(h);
    worst = std::max(worst, sol.bid_n[h] - std::min(s - b.soe_min(), b.soe_max() - s));
  }
  const double cap0 = std::min(0.5 - b.soe_min(), b.soe_max() - 0.5);
  const bool ok = worst <= kAuditTol && std::abs(sol.bid_n[0] - 0.4) <= kAuditTol && std::abs(cap0 - 0.4) <= 1e-12;
  return judge(ok, fmt::format("zero baseline, FCR_N: hour-0 bid {:.6f} MW at S_h = 0.5 MWh (cap {:.6f}); "
                               "max(bid - cap) over 24 h = {:.3g}",
                               sol.bid_n[0], cap0, worst));
}

Outcome degradation_effect() {
  const ExternalSolver solver;
  Index wins = 0;
  std::string d;
  for (std::uint64_t seed = 1; seed <= 7; ++seed) {
    auto cfg = synthetic_config(seed, 7, 4);
    const auto data = load_scenario(cfg);
    const auto with = run_case(cfg, data, MarketCase::MULTI, true, solver);
    const auto without = run_case(cfg, data, MarketCase::MULTI, false, solver);
    const double a = with.aging.total_cost(), b = without.aging.total_cost();
    if (a <= b) ++wins;
    d += fmt::format("{}seed {}: {:.1f} vs {:.1f} EUR ({:+.1f}%)", seed == 1 ? "" : "; ", seed, a, b, 100 * (a - b) / b);
    std::fflush(stdout);
  }
  return judge(wins >= 6, fmt::format("MULTI, 7 days x 7 seeds, 15 min steps: with-deg aging <= no-deg in {}/7 ({})",
                                      wins, d));
}

Outcome linearization_fidelity() {
  const BatterySpec spec;
  const auto npv = battery_npv(spec);
  double cal_worst = 0;
  for (double age : {0.5, 3.5, 180.0})
    for (double dt : {60.0, 900.0}) {
      const auto lin = linearize_calendar(spec, age, dt, npv);
      for (double q : {0.0, 0.5, 0.7, 1.0}) {
        const double soe = q * spec.capacity;
        const double curve = calendar_step_cost(soe, spec, age, dt, npv);
        cal_worst = std::max(cal_worst, std::abs(lin.value(soe) - curve) / std::abs(curve));
      }
    }
  const auto cyc = linearize_cycle(spec, npv);
  const bool cal_ok = cal_worst <= 1e-12;
  const bool cyc_ok = cyc.max_relative_error <= 0.10;
  return judge(cal_ok && cyc_ok,
               fmt::format("calendar breakpoints worst rel error {:.3g} (tol 1e-12, {}); cycle fit k = {:.6g} EUR/MWh, "
                           "max rel error over [0.1, 1.0] MW = {:.1f}% (tol 10%, {}); best achievable by any single "
                           "coefficient {:.1f}%",
                           cal_worst, cal_ok ? "ok" : "exceeded", cyc.k_cyc, 100 * cyc.max_relative_error,
                           cyc_ok ? "ok" : "exceeded", 100 * oracle::kCycleMinimaxRelErr));
}

Outcome npv_value() {
  const double k = battery_npv(BatterySpec{}).value / 1e3;
  return judge(std::abs(k - 63.21) <= 0.01, fmt::format("{:.4f} kEUR, expected 63.21 +/- 0.01", k));
}

Outcome se3_shape() {
  const char* freq = std::getenv("FCR_SE3_FREQUENCY");
  const char* prices = std::getenv("FCR_SE3_PRICES");
  if (!freq || !prices) return {Verdict::Skip, "set FCR_SE3_FREQUENCY and FCR_SE3_PRICES to the 2022 SE3 files"};
  const char* sph = std::getenv("FCR_SE3_STEPS_PER_HOUR");
  auto cfg = parse_config(fmt::format("frequency_file = {}\nprice_file = {}\ndays = 365\nsteps_per_hour = {}\n"
                                      "start_date = 2022-01-01\n",
                                      freq, prices, sph ? sph : "60"));
  cfg.validate();
  const auto data = load_scenario(cfg);
  const ExternalSolver solver;
  std::array<double, 5> profit{};
  HorizonResult multi;
  for (std::size_t k = 0; k < kAllCases.size(); ++k) {
    auto r = run_case(cfg, data, kAllCases[k], true, solver, cfg.output_dir);
    profit[k] = r.profit;
    if (kAllCases[k] == MarketCase::MULTI) multi = std::move(r);
  }
  Index hours = 0;
  for (auto c : multi.mix) hours += c;
  const double dudd = hours ? static_cast<double>(multi.mix[static_cast<std::size_t>(MixLabel::DU_DD)]) / hours : 0;
  bool beats = true;
  for (std::size_t k = 0; k + 1 < kAllCases.size(); ++k) beats = beats && profit[4] > profit[k];
  return judge(multi.days.size() == 365 && dudd > 0.5 && beats,
               fmt::format("{} days, DU+DD share {:.1f}% of hours, MULTI profit {:.1f} kEUR vs best single {:.1f} kEUR",
                           multi.days.size(), 100 * dudd, profit[4] / 1e3,
                           *std::max_element(profit.begin(), profit.begin() + 4) / 1e3));
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"droop", "droop correctness", droop_correctness},
      {"energy", "energy-content conservation", energy_conservation},
      {"soe", "SoE telescoping", soe_telescoping},
      {"requirements", "requirement and endurance audit", requirement_audit},
      {"oracle", "oracle equivalence", oracle_equivalence},
      {"inclusion", "feasible-set inclusion", feasible_set_inclusion},
      {"fcrn-cap", "FCR-N endurance cap", fcrn_endurance_cap},
      {"degradation", "degradation-pricing effect", degradation_effect},
      {"linearization", "linearization fidelity", linearization_fidelity},
      {"npv", "battery NPV", npv_value},
      {"se3", "SE3 dataset shape check", se3_shape},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else if (a == "--list") {
      for (const auto& c : criteria()) fmt::print("{}\t{}\n", c.id, c.title);
      return 0;
    } else {
      fmt::print(stderr, "usage: acceptance [--only ID | --list]\n");
      return 2;
    }
  }

  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    fmt::print("{} [{}] {}: {} ({:.1f} s)\n", tag, c.id, c.title, o.detail, secs);
    std::fflush(stdout);
    failed += o.verdict == Verdict::Fail;
  }
  if (ran == 0) {
    fmt::print(stderr, "no criterion named '{}'\n", only);
    return 2;
  }
  return failed ? 1 : 0;
}
