#pragma once

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fcr/day_model.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on scope exit.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag = "fcr-test") {
    auto tmpl = (std::filesystem::temp_directory_path() / (tag + "-XXXXXX")).string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline fcr::PriceSeries flat_prices(fcr::Index hours, double spot = 50.0, double cap = 0.0) {
  fcr::PriceSeries p;
  p.spot = Eigen::ArrayXd::Constant(hours, spot);
  p.fcr_n = p.fcr_du = p.fcr_dd = Eigen::ArrayXd::Constant(hours, cap);
  p.up_reg = p.down_reg = Eigen::ArrayXd::Constant(hours, spot);
  return p;
}

// A day's inputs on `hours` hours with the given trace and prices.
inline fcr::DayInputs day_inputs(const fcr::TimeGrid& grid, const Eigen::ArrayXd& hz, const fcr::PriceSeries& prices,
                                 fcr::MarketCase mc = fcr::MarketCase::MULTI, double s0 = 0.5,
                                 bool deg = true) {
  fcr::BatterySpec spec;
  const auto npv = fcr::battery_npv(spec);
  fcr::DayInputs in{grid, prices, fcr::energy_content(hz, grid), spec,
                    fcr::linearize_calendar(spec, 0.5, static_cast<double>(grid.step_seconds()), npv),
                    fcr::linearize_cycle(spec, npv), s0, mc, {}};
  in.options.degradation_in_objective = deg;
  return in;
}

// Synthetic inputs for a short day.
inline fcr::DayInputs synthetic_day(std::uint64_t seed, fcr::Index hours, fcr::Index steps_per_hour,
                                    fcr::MarketCase mc = fcr::MarketCase::MULTI, double s0 = 0.5, bool deg = true) {
  fcr::Horizon hz{0, 1, steps_per_hour, hours};
  const auto f = fcr::synth_frequency(seed, hz);
  return day_inputs(hz.day(0), f.hz, fcr::synth_prices(seed, hours), mc, s0, deg);
}

}  // namespace testing
