#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "fcr/ingest.hpp"
#include "fcr/time_grid.hpp"

namespace fcr {

class AlignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Droop-curve breakpoints in Hz.
struct DroopParams {
  double f_n = 50.0;
  double f_min_n = 49.9;
  double f_max_n = 50.1;
  double f_min_d = 49.5;
  double f_max_d = 50.5;

  void validate() const {
    if (!(f_min_d < f_min_n && f_min_n < f_n && f_n < f_max_n && f_max_n < f_max_d))
      throw std::invalid_argument("droop: breakpoints must be strictly increasing");
  }
};

/// Signed FCR-N activation per unit of bid: positive is down-regulation
/// (the unit absorbs power), negative is up-regulation. Saturates at +-1
/// outside the normal band.
template <typename Scalar>
Scalar fcrn_fraction(Scalar f, const DroopParams& p) {
  if (f >= Scalar(p.f_max_n)) return Scalar(1);
  if (f <= Scalar(p.f_min_n)) return Scalar(-1);
  if (f >= Scalar(p.f_n)) return (f - Scalar(p.f_n)) / Scalar(p.f_max_n - p.f_n);
  return -(f - Scalar(p.f_n)) / Scalar(p.f_min_n - p.f_n);
}

/// FCR-D up activation per unit of bid, in [0, 1].
template <typename Scalar>
Scalar fcrd_up_fraction(Scalar f, const DroopParams& p) {
  if (f >= Scalar(p.f_min_n)) return Scalar(0);
  if (f <= Scalar(p.f_min_d)) return Scalar(1);
  return (f - Scalar(p.f_min_n)) / Scalar(p.f_min_d - p.f_min_n);
}

/// FCR-D down activation per unit of bid, in [0, 1].
template <typename Scalar>
Scalar fcrd_down_fraction(Scalar f, const DroopParams& p) {
  if (f <= Scalar(p.f_max_n)) return Scalar(0);
  if (f >= Scalar(p.f_max_d)) return Scalar(1);
  return (f - Scalar(p.f_max_n)) / Scalar(p.f_max_d - p.f_max_n);
}

/// Activation fractions and per-unit-bid activated energy (hours) for one
/// day. Per-step arrays have grid.steps() entries; hourly ones grid.hours.
struct EnergyContentSeries {
  TimeGrid grid;
  Eigen::ArrayXd frac_n;   // signed, see fcrn_fraction
  Eigen::ArrayXd frac_du;  // [0, 1]
  Eigen::ArrayXd frac_dd;  // [0, 1]

  Eigen::ArrayXd e_ur_n, e_dr_n, e_ur_du, e_dr_dd;  // per step
  Eigen::ArrayXd hour_ur_n, hour_dr_n, hour_ur_du, hour_dr_dd;
};

/// Applies the droop curves sample by sample (zero-order hold within a step)
/// and accumulates hourly sums in step order.
EnergyContentSeries energy_content(const Eigen::Ref<const Eigen::ArrayXd>& hz, const TimeGrid& grid,
                                   const DroopParams& params = {});

/// Writes `timestep,e_ur_n,e_dr_n,e_ur_du,e_dr_dd`.
void write_energy_content_csv(const std::filesystem::path& path, const EnergyContentSeries& series);

}  // namespace fcr
