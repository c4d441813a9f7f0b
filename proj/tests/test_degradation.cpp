#include <doctest.h>

#include "fcr/degradation.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace fcr;
using doctest::Approx;

TEST_CASE("npv with data-sheet inputs") {
  const BatterySpec spec;
  const auto npv = battery_npv(spec);
  CHECK(npv.value == Approx(oracle::kNpvTableII).epsilon(1e-12));
  CHECK(std::abs(npv.value - 63210.0) <= 10.0);
  CHECK(npv.alpha == spec.interest_rate);
  CHECK(cost_per_percent(npv, spec) == Approx(oracle::kEurPerPercent).epsilon(1e-12));
}

TEST_CASE("npv limits and errors") {
  BatterySpec spec;
  spec.salvage_ratio = 1.0;
  spec.om_cost = 0.0;
  CHECK(battery_npv(spec).value == 0.0);

  spec = {};
  spec.om_cost = 0.0;
  spec.interest_rate = 50.0;
  CHECK(battery_npv(spec).value < 1e-10);

  spec = {};
  spec.lifetime_years = 0;
  CHECK_THROWS_AS(battery_npv(spec), std::invalid_argument);
  spec = {};
  spec.interest_rate = 0;
  CHECK_THROWS_AS(battery_npv(spec), std::invalid_argument);

  AgingModelOptions o;
  o.npv_alpha = 0.1;
  spec = {};
  CHECK(battery_npv(spec, o).value < battery_npv(spec).value);
}

TEST_CASE("calendar stress on the percent scale") {
  const AgingCoefficients c;
  CHECK(calendar_stress(50.0, c) == Approx(oracle::kStress50).epsilon(1e-12));
  CHECK(calendar_stress(70.0, c) == Approx(10.3 * 4900 - 1083.6 * 70 + 31447).epsilon(1e-12));
  CHECK(calendar_stress(100.0, c) == Approx(2.6 * 1e4 - 409.5 * 100 + 22035).epsilon(1e-12));
}

TEST_CASE("calendar aging step") {
  const BatterySpec s;
  CHECK(calendar_aging_step(0.5, s.temperature, 10.0, 0.0, s.aging, s.capacity) == 0.0);
  CHECK(arrhenius_factor(s.temperature, s.aging) == Approx(oracle::kArrhenius).epsilon(1e-12));
  CHECK(calendar_aging_step(0.5, s.temperature, 0.0, 60.0, s.aging, s.capacity) ==
        Approx(oracle::kCalStep50Age0Dt60).epsilon(1e-12));
  CHECK(calendar_aging_step(0.5, s.temperature, 10.0, 60.0, s.aging, s.capacity) ==
        Approx(oracle::kCalStep50Age10Dt60).epsilon(1e-10));
  const double lo = calendar_aging_step(0.3, s.temperature, 10.0, 60.0, s.aging, s.capacity);
  const double hi = calendar_aging_step(0.9, s.temperature, 10.0, 60.0, s.aging, s.capacity);
  CHECK(lo == Approx(oracle::kCalStep30Age10Dt60).epsilon(1e-10));
  CHECK(hi == Approx(oracle::kCalStep90Age10Dt60).epsilon(1e-10));
  CHECK(hi > lo);
}

TEST_CASE("calendar increments telescope to the cumulative square-root law") {
  const BatterySpec s;
  double sum = 0;
  for (int t = 0; t < 1440; ++t)
    sum += calendar_aging_step(0.5, s.temperature, 3.0 + t / 1440.0, 60.0, s.aging, s.capacity);
  const double whole = calendar_stress(50.0, s.aging) * arrhenius_factor(s.temperature, s.aging) *
                       (std::sqrt(4.0) - std::sqrt(3.0));
  CHECK(sum == Approx(whole).epsilon(1e-10));
}

TEST_CASE("printed arrhenius sign is available for audit") {
  const BatterySpec s;
  AgingModelOptions o;
  o.arrhenius_positive_exponent = true;
  CHECK(arrhenius_factor(s.temperature, s.aging, o) * arrhenius_factor(s.temperature, s.aging) ==
        Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cycle aging step") {
  const BatterySpec s;
  CHECK(cycle_aging_step(0, 0, 60, s.aging, 1.0, 1.0) == 0.0);
  // One hour at 1 C with a unit Ah scale is the nonlinear factor itself.
  CHECK(cycle_aging_step(1.0, 0, 3600, s.aging, 1.0, 1.0) == Approx(oracle::kCycleFactorAtOneC).epsilon(1e-12));
  CHECK(cycle_aging_step(0.4, 0, 120, s.aging, 1.0, 1.5) ==
        Approx(2 * cycle_aging_step(0.4, 0, 60, s.aging, 1.0, 1.5)).epsilon(1e-14));
  // One full-power hour against two half-power hours.
  const double full = cycle_aging_step(0, 1.0, 3600, s.aging, 1.0, 1.5);
  const double half = 2 * cycle_aging_step(0, 0.5, 3600, s.aging, 1.0, 1.5);
  CHECK(full / half == Approx(oracle::kCycleFullVsHalfRatio).epsilon(1e-12));
}

TEST_CASE("calendar secants") {
  const BatterySpec s;
  const auto npv = battery_npv(s);
  const auto lin = linearize_calendar(s, 0.5, 60.0, npv);
  SUBCASE("exact at the four breakpoints") {
    for (double q : {0.0, 0.5, 0.7, 1.0}) {
      const double curve = calendar_step_cost(q * s.capacity, s, 0.5, 60.0, npv);
      CHECK(std::abs(lin.value(q * s.capacity) - curve) <= 1e-12 * std::abs(curve));
    }
  }
  SUBCASE("spans partition the capacity") {
    CHECK(lin.segments[0].lo == 0.0);
    CHECK(lin.segments[0].hi == lin.segments[1].lo);
    CHECK(lin.segments[1].hi == lin.segments[2].lo);
    CHECK(lin.segments[2].hi == s.capacity);
    CHECK(lin.segments[0].hi == 0.5 * s.capacity);
    CHECK(lin.segments[1].hi == 0.7 * s.capacity);
  }
  SUBCASE("mid-span error at a quarter of capacity") {
    CHECK(lin.value(0.25) == Approx(oracle::kCalSecantAtQuarter).epsilon(1e-10));
    CHECK(calendar_step_cost(0.25, s, 0.5, 60.0, npv) == Approx(oracle::kCalCurveAtQuarter).epsilon(1e-10));
    const double err = std::abs(lin.value(0.25) - calendar_step_cost(0.25, s, 0.5, 60.0, npv));
    CHECK(err <= lin.segments[0].max_error * (1 + 1e-12));
    // The quarter point is the midpoint of span 0, where the sag is largest.
    CHECK(err == Approx(lin.segments[0].max_error).epsilon(1e-9));
  }
  SUBCASE("zero npv zeroes the secants") {
    BatterySpec z;
    z.replacement_cost = 0;
    z.om_cost = 0;
    const auto zl = linearize_calendar(z, 0.5, 60.0, battery_npv(z));
    for (const auto& seg : zl.segments) {
      CHECK(seg.slope == 0.0);
      CHECK(seg.intercept == 0.0);
    }
  }
  SUBCASE("secants stay within the reported error on a sweep") {
    for (int i = 0; i <= 1000; ++i) {
      const double soe = s.capacity * i / 1000.0;
      const auto k = soe <= 0.5 ? 0 : (soe <= 0.7 ? 1 : 2);
      const double err = std::abs(lin.value(soe) - calendar_step_cost(soe, s, 0.5, 60.0, npv));
      CHECK(err <= lin.segments[static_cast<std::size_t>(k)].max_error * (1 + 1e-9) + 1e-15);
    }
  }
}

TEST_CASE("cycle linearization") {
  const BatterySpec s;
  const auto npv = battery_npv(s);
  const auto lin = linearize_cycle(s, npv);
  CHECK(lin.k_cyc > 0);
  CHECK(lin.k_cyc == Approx(oracle::kCycleK).epsilon(1e-10));
  CHECK(lin.max_relative_error == Approx(oracle::kCycleMaxRelErr).epsilon(1e-9));
  CHECK(lin.relative_error_at_max == Approx(oracle::kCycleRelErrAtMax).epsilon(1e-9));
  CHECK(lin.full_scale_error == Approx(oracle::kCycleFullScaleErr).epsilon(1e-9));
  CHECK(lin.relative_error_at_max <= 0.10);
  CHECK(lin.samples == 50);
  CHECK(lin.fit_lo == 0.1);
  CHECK(lin.fit_hi == 1.0);
  // No single coefficient does better pointwise than the minimax bound.
  CHECK(lin.max_relative_error >= oracle::kCycleMinimaxRelErr);

  SUBCASE("q4 = 0 is already linear") {
    BatterySpec flat;
    flat.aging.q4 = 0.0;
    const auto fl = linearize_cycle(flat, battery_npv(flat));
    CHECK(fl.max_relative_error <= 1e-14);
    CHECK(fl.k_cyc == Approx(cost_per_percent(battery_npv(flat), flat) * flat.aging.q_poly_at_temp *
                             flat.cycle_ah_per_unit / flat.capacity)
                          .epsilon(1e-12));
  }
  SUBCASE("tolerance guard") {
    CHECK_THROWS_AS(linearize_cycle(s, npv, 0.05), FitToleranceExceeded);
  }
}

TEST_CASE("post-calculated aging") {
  const BatterySpec s;
  const auto npv = battery_npv(s);
  const Eigen::ArrayXd soe = Eigen::ArrayXd::Constant(1440, 0.5);
  const Eigen::ArrayXd zero = Eigen::ArrayXd::Zero(1440);
  SUBCASE("idle day") {
    const auto a = post_calculate_aging(soe, zero, zero, 60.0, s, 5.0, npv);
    CHECK(a.cycle_cost == 0.0);
    CHECK(a.cycle_pct == 0.0);
    CHECK(a.calendar_cost > 0.0);
    CHECK(a.total_cost() == a.calendar_cost);
  }
  SUBCASE("deterministic and non-negative") {
    Eigen::ArrayXd p = Eigen::ArrayXd::LinSpaced(1440, 0.0, 0.9);
    const auto a = post_calculate_aging(soe, p, zero, 60.0, s, 5.0, npv);
    const auto b = post_calculate_aging(soe, p, zero, 60.0, s, 5.0, npv);
    CHECK(a.calendar_cost == b.calendar_cost);
    CHECK(a.cycle_cost == b.cycle_cost);
    CHECK(a.cycle_pct > 0.0);
    CHECK(a.calendar_cost == Approx(cost_per_percent(npv, s) * a.calendar_pct).epsilon(1e-14));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(post_calculate_aging(soe, zero.head(10), zero, 60.0, s, 0.0, npv), std::invalid_argument);
  }
}

TEST_CASE("linearization audit csv") {
  testing::ScratchDir dir;
  const BatterySpec s;
  const auto npv = battery_npv(s);
  write_linearization_csv(dir / "lin.csv", linearize_calendar(s, 1.0, 60, npv), linearize_cycle(s, npv));
  const auto text = testing::read_file(dir / "lin.csv");
  CHECK(text.rfind("span,lo,hi,slope,intercept,max_err\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
