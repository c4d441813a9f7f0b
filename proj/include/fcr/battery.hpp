#pragma once

#include <stdexcept>
#include <string>

namespace fcr {

/// Calendar and cycle aging coefficients of the NMC+LMO cell model.
/// Calendar quadratics take SoC in percent; the result is percent capacity
/// loss per sqrt(day) before the Arrhenius factor.
struct AgingCoefficients {
  double a1 = -1.1, a2 = 89.7, a3 = 1224.6;      // 0 <= SoC <= 50 %
  double b1 = 10.3, b2 = -1083.6, b3 = 31447.0;  // 50 < SoC <= 70 %
  double c1 = 2.6, c2 = -409.5, c3 = 22035.0;    // 70 < SoC <= 100 %
  double activation_energy = 24500.0;            // J/mol
  double gas_constant = 8.314;                   // J/(mol K)
  double q_poly_at_temp = 0.0008;                // q1 K^2 + q2 K + q3 at the operating temperature
  double q4 = 0.3903;                            // per C-rate
};

/// Physical, economic and aging parameters of the storage unit. Powers in
/// MW, energies in MWh, money in EUR.
struct BatterySpec {
  double capacity = 1.0;
  double p_min = 0.0;
  double p_max = 1.0;
  double soc_min = 0.1;
  double soc_max = 0.9;
  double eta_ch = 0.93;
  double eta_ds = 0.93;
  double min_bid_n = 0.1;
  double min_bid_du = 0.1;
  double min_bid_dd = 0.1;
  double replacement_cost = 137000.0;  // EUR/MWh of capacity
  double om_cost = 2740.0;             // EUR/yr
  double eol_retained = 0.8;
  int lifetime_years = 10;
  double interest_rate = 0.05;
  double salvage_ratio = 0.5;
  double temperature = 293.15;  // K
  /// Ah of the reference cell per unit of capacity moved; converts
  /// normalized throughput into the cycle model's Ah axis.
  double cycle_ah_per_unit = 1.5;
  AgingCoefficients aging;

  double soe_min() const { return soc_min * capacity; }
  double soe_max() const { return soc_max * capacity; }

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("battery: " + what); };
    if (!(capacity > 0)) fail("capacity must be positive");
    if (!(0 <= soc_min && soc_min < soc_max && soc_max <= 1)) fail("need 0 <= soc_min < soc_max <= 1");
    if (!(0 <= p_min && p_min <= p_max)) fail("need 0 <= p_min <= p_max");
    if (!(0 < eta_ch && eta_ch <= 1 && 0 < eta_ds && eta_ds <= 1)) fail("efficiencies must lie in (0, 1]");
    if (!(0 < eol_retained && eol_retained < 1)) fail("eol_retained must lie in (0, 1)");
    for (double b : {min_bid_n, min_bid_du, min_bid_dd})
      if (!(0 <= b && b <= 2 * p_max)) fail("min bid sizes must lie in [0, 2 p_max]");
    if (!(aging.q_poly_at_temp > 0)) fail("q_poly_at_temp must be positive");
    if (!(cycle_ah_per_unit > 0)) fail("cycle_ah_per_unit must be positive");
  }
};

}  // namespace fcr
