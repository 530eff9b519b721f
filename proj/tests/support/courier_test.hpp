#pragma once

// Shared helpers for the unit and acceptance tests. The oracles below restate
// the delivery model from its published constants with their own tables and
// arithmetic; they never call the library's evaluators.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "courier/catalog.hpp"
#include "courier/engine.hpp"
#include "courier/order.hpp"
#include "courier/params.hpp"

namespace courier::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(COURIER_FIXTURE_DIR) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ScenarioModel variance_off(const std::string& preset = "base") {
  ModelParams p = ModelParams::defaults();
  p.stochastic = false;
  return ScenarioModel(p, *find_preset(preset));
}

inline ScenarioModel stochastic(const std::string& preset = "base") {
  return ScenarioModel(ModelParams::defaults(), *find_preset(preset));
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

namespace oracle {

// Table 3 means and the calibration defaults, transcribed by hand.
inline constexpr double kCarMph = 7.1;
inline constexpr double kSubwayMph = 17.0;
inline constexpr double kBikeMph = 5.0;
inline constexpr double kWalkMph = 3.5;
inline constexpr double kRobotMph = 4.0;
inline constexpr double kAirTaxiMph = 170.0;
inline constexpr double kPandemicMph = 52.0;
inline constexpr double kWage = 13.37;

inline constexpr double kFare = 2.75;
inline constexpr double kCarPerMile = 0.60;
inline constexpr double kEbikePerMile = 0.05;
inline constexpr double kRobotPerMile = 6.00;
inline constexpr double kAirPerMile = 6.00;
inline constexpr double kCarParkPerHour = 8.0;
inline constexpr double kBikeParkPerHour = 0.50;

inline double co2_per_mile(Mode m) {
  if (m == Mode::car) return 0.96;
  if (m == Mode::bus) return 0.64;
  if (m == Mode::subway) return 0.33;
  return 0.0;
}

// Busy zones of the bundled city slow cars and buses in the two day buckets
// and speed them up at night.
inline double traffic(ZoneId zone, TimeBucket b) {
  const bool busy = zone == 1 || zone == 3 || zone == 5;
  if (!busy) return 1.0;
  switch (b) {
    case TimeBucket::early_morning: return 1.0;
    case TimeBucket::morning_early_afternoon:
    case TimeBucket::late_afternoon_evening: return 0.7;
    case TimeBucket::night: return 1.2;
  }
  return 1.0;
}

/// Mean leg speed with variance off.
inline double speed(Mode m, TimeBucket b, ZoneId from, ZoneId to, double lbs, bool pandemic) {
  switch (m) {
    case Mode::car:
    case Mode::bus:
      if (pandemic) return kPandemicMph;
      return kCarMph * (traffic(from, b) + traffic(to, b)) / 2.0;
    case Mode::subway: return kSubwayMph;
    case Mode::bike: return kBikeMph * (1.0 - 0.5 * lbs / 300.0);
    case Mode::walk: return kWalkMph * (1.0 - 0.5 * lbs / 40.0);
    case Mode::robot: return kRobotMph * (1.0 - 0.5 * lbs / 20.0);
    case Mode::air_taxi: return kAirTaxiMph;
  }
  return 0.0;
}

/// Expected wait (half a headway) in hours.
inline double mean_wait(Mode m, TimeBucket b) {
  const bool night = b == TimeBucket::night;
  if (m == Mode::subway) return (night ? 20.0 : 6.0) / 60.0 / 2.0;
  if (m == Mode::bus) return (night ? 30.0 : 10.0) / 60.0 / 2.0;
  if (m == Mode::air_taxi) return 15.0 / 60.0 / 2.0;
  return 0.0;
}

struct Result {
  double time_h = 0.0;
  double wait_h = 0.0;
  double cost = 0.0;
  double co2 = 0.0;
};

/// Evaluates a three-leg trip from leg modes, distances, speeds and waits.
inline Result evaluate(const std::array<Mode, 3>& modes, const std::array<double, 3>& miles,
                       const std::array<double, 3>& mph, const std::array<double, 3>& waits,
                       double wage) {
  Result r;
  std::array<double, 3> h{};
  for (int i = 0; i < 3; ++i) {
    h[i] = miles[i] > 0.0 ? miles[i] / mph[i] : 0.0;
    r.time_h += h[i];
    r.wait_h += waits[i];
  }
  const double trip = r.time_h + r.wait_h;
  for (int i = 0; i < 3; ++i) {
    const Mode m = modes[i];
    const double d = miles[i];
    // Messenger wage on every leg the messenger rides or walks, plus waits.
    if (m != Mode::robot) r.cost += wage * (h[i] + waits[i]);
    if (m == Mode::car) {
      r.cost += kCarPerMile * d;
      if (d > 0.0) r.cost += kCarParkPerHour * std::max(1.0, trip - h[i]);
    } else if (m == Mode::bike) {
      r.cost += kEbikePerMile * d;
      if (d > 0.0) r.cost += kBikeParkPerHour * std::max(1.0, trip - h[i]);
    } else if (m == Mode::bus || m == Mode::subway) {
      if (d > 0.0) r.cost += kFare;
    } else if (m == Mode::robot) {
      r.cost += kRobotPerMile * d;
    } else if (m == Mode::air_taxi) {
      r.cost += kAirPerMile * d;
    }
    r.co2 += co2_per_mile(m) * d;
  }
  return r;
}

}  // namespace oracle

/// Builds a plan by hand: three legs with the given modes and lengths.
inline LegPlan make_plan(const std::array<Mode, 3>& modes, const std::array<double, 3>& miles,
                         ZoneId from = 2, ZoneId to = 2) {
  LegPlan p;
  for (std::size_t i = 0; i < 3; ++i) {
    p.legs[i].mode = modes[i];
    p.legs[i].distance_mi = miles[i];
    p.legs[i].from_zone = from;
    p.legs[i].to_zone = to;
  }
  return p;
}

inline Alternative make_alternative(const std::array<Mode, 3>& modes) {
  for (const auto& a : all_alternatives()) {
    if (a.first == modes[0] && a.middle == modes[1] && a.last == modes[2]) return a;
  }
  return Alternative{0, modes[0], modes[1], modes[2], Tier::existing};
}

}  // namespace courier::test
