#pragma once

#include <cstdint>
#include <stdexcept>

namespace fcr {

using Index = std::int64_t;

/// Sub-hourly step index of one optimization day.
///
/// A regular day has 24 hours; shorter grids are allowed for toy
/// instances. Steps are uniform and never straddle an hour boundary.
struct TimeGrid {
  Index day_index = 0;
  Index steps_per_hour = 60;
  Index hours = 24;

  TimeGrid() = default;
  TimeGrid(Index day, Index steps_per_hour_, Index hours_ = 24)
      : day_index(day), steps_per_hour(steps_per_hour_), hours(hours_) {
    if (steps_per_hour <= 0 || 3600 % steps_per_hour != 0)
      throw std::invalid_argument("steps_per_hour must divide 3600");
    if (hours <= 0) throw std::invalid_argument("hours must be positive");
  }

  Index steps() const { return steps_per_hour * hours; }
  Index step_seconds() const { return 3600 / steps_per_hour; }
  /// Step length in hours.
  double step_hours() const { return static_cast<double>(step_seconds()) / 3600.0; }
  Index hour_of_step(Index t) const { return t / steps_per_hour; }
  Index first_step(Index h) const { return h * steps_per_hour; }
};

/// A contiguous run of days sharing one step layout, anchored at a UTC
/// epoch (seconds). Day d covers [start + d*86400, start + (d+1)*86400).
struct Horizon {
  std::int64_t start_epoch = 0;
  Index days = 1;
  Index steps_per_hour = 60;
  Index hours_per_day = 24;

  TimeGrid day(Index d) const { return TimeGrid(d, steps_per_hour, hours_per_day); }
  Index steps_per_day() const { return steps_per_hour * hours_per_day; }
  Index total_steps() const { return steps_per_day() * days; }
  Index total_hours() const { return hours_per_day * days; }
  Index step_seconds() const { return 3600 / steps_per_hour; }
};

}  // namespace fcr
