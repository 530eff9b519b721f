#pragma once

#include <array>
#include <optional>

#include "courier/geo_city.hpp"
#include "courier/params.hpp"

namespace courier {

/// One customer request.
struct Order {
  GeoPoint origin;
  GeoPoint destination;
  int time_of_day_min = 12 * 60;  // minutes since midnight
  double weight_lbs = 1.0;
  double volume_cuft = 0.1;
};

inline constexpr double kMinOrderWeightLbs = 1.0;
inline constexpr double kMaxOrderWeightLbs = 350.0;

/// Throws Error(invalid_order) naming the first violated invariant.
void validate_order(const Order& order);

enum class LegRole : std::uint8_t { first, middle, last };
inline constexpr std::array<LegRole, 3> kAllLegs = {LegRole::first, LegRole::middle, LegRole::last};

struct Leg {
  Mode mode = Mode::car;
  GeoPoint start;
  GeoPoint end;
  double distance_mi = 0.0;
  /// Zones whose traffic multipliers apply to this leg.
  ZoneId from_zone = 0;
  ZoneId to_zone = 0;
};

struct LegPlan {
  std::array<Leg, 3> legs{};
  /// Set for subway and air-taxi middles.
  std::optional<int> board_station;
  std::optional<int> alight_station;
  /// False when a station-based middle had no network to board; the legs are
  /// then zero-length placeholders and the plan is infeasible.
  bool stations_resolved = true;

  const Leg& leg(LegRole role) const { return legs[static_cast<std::size_t>(role)]; }
  double total_distance() const noexcept {
    return legs[0].distance_mi + legs[1].distance_mi + legs[2].distance_mi;
  }
};

}  // namespace courier
