#ifndef MANETSIM_SIM_TIME_HPP
#define MANETSIM_SIM_TIME_HPP

#include <cmath>
#include <cstdint>

namespace manetsim {

// Virtual time in integer microseconds. Integer ticks keep event ordering
// and replay exact across platforms.
using SimTime = std::int64_t;

constexpr SimTime kMicrosPerSecond = 1'000'000;

constexpr SimTime from_micros(std::int64_t us) { return us; }
constexpr SimTime from_millis(std::int64_t ms) { return ms * 1'000; }

inline SimTime from_seconds(double s) {
  return static_cast<SimTime>(std::llround(s * static_cast<double>(kMicrosPerSecond)));
}

constexpr double to_seconds(SimTime t) {
  return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond);
}

constexpr double to_millis(SimTime t) { return static_cast<double>(t) / 1'000.0; }

}  // namespace manetsim

#endif
