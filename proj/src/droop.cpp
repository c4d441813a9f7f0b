#include "fcr/droop.hpp"

#include <fmt/format.h>

#include <fstream>

namespace fcr {

EnergyContentSeries energy_content(const Eigen::Ref<const Eigen::ArrayXd>& hz, const TimeGrid& grid,
                                   const DroopParams& params) {
  params.validate();
  if (hz.size() != grid.steps())
    throw AlignmentError(fmt::format("energy_content: trace has {} samples, grid needs {}", hz.size(), grid.steps()));

  EnergyContentSeries s;
  s.grid = grid;
  const double dt_h = grid.step_hours();
  s.frac_n = hz.unaryExpr([&](double f) { return fcrn_fraction(f, params); });
  s.frac_du = hz.unaryExpr([&](double f) { return fcrd_up_fraction(f, params); });
  s.frac_dd = hz.unaryExpr([&](double f) { return fcrd_down_fraction(f, params); });

  s.e_dr_n = s.frac_n.max(0.0) * dt_h;
  s.e_ur_n = (-s.frac_n).max(0.0) * dt_h;
  s.e_ur_du = s.frac_du * dt_h;
  s.e_dr_dd = s.frac_dd * dt_h;

  const Index sph = grid.steps_per_hour;
  auto hourly = [&](const Eigen::ArrayXd& per_step) {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(grid.hours);
    for (Index t = 0; t < grid.steps(); ++t) out[t / sph] += per_step[t];
    return out;
  };
  s.hour_ur_n = hourly(s.e_ur_n);
  s.hour_dr_n = hourly(s.e_dr_n);
  s.hour_ur_du = hourly(s.e_ur_du);
  s.hour_dr_dd = hourly(s.e_dr_dd);
  return s;
}

void write_energy_content_csv(const std::filesystem::path& path, const EnergyContentSeries& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << "timestep,e_ur_n,e_dr_n,e_ur_du,e_dr_dd\n";
  for (Index t = 0; t < s.grid.steps(); ++t)
    out << fmt::format("{},{},{},{},{}\n", t, s.e_ur_n[t], s.e_dr_n[t], s.e_ur_du[t], s.e_dr_dd[t]);
}

}  // namespace fcr
