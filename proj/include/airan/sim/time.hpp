#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace airan::sim {

/// Simulated time in integer microseconds. Integer so that the deadline
/// classes (10 ms real-time, 15 min OAM batch) compare exactly.
struct SimTime {
  std::int64_t us = 0;

  static constexpr SimTime zero() { return SimTime{0}; }
  static constexpr SimTime usec(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime msec(std::int64_t v) { return SimTime{v * 1'000}; }
  static constexpr SimTime sec(std::int64_t v) { return SimTime{v * 1'000'000}; }
  static constexpr SimTime minutes(std::int64_t v) { return SimTime{v * 60'000'000}; }

  constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }
  constexpr double millis() const { return static_cast<double>(us) * 1e-3; }

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(SimTime o) const { return SimTime{us + o.us}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{us - o.us}; }
  constexpr SimTime& operator+=(SimTime o) {
    us += o.us;
    return *this;
  }
};

inline std::string to_string(SimTime t) { return std::to_string(t.us) + "us"; }

/// Delivery contract anchors for collection tasks.
inline constexpr SimTime kRealTimeDeadline = SimTime::msec(10);
inline constexpr SimTime kNearRtDeadline = SimTime::sec(1);
inline constexpr SimTime kOamReportInterval = SimTime::minutes(15);

}  // namespace airan::sim
