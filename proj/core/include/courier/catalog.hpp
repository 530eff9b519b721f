#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "courier/order.hpp"
#include "courier/params.hpp"

namespace courier {

enum class Tier : std::uint8_t { existing, emerging };

std::string_view to_string(Tier tier);

struct Alternative {
  int id = 0;
  Mode first = Mode::car;
  Mode middle = Mode::car;
  Mode last = Mode::car;
  Tier tier = Tier::existing;

  /// Same mode on all three legs; planned as one direct leg.
  bool single_mode() const noexcept { return first == middle && middle == last; }
  bool uses(Mode m) const noexcept { return first == m || middle == m || last == m; }
  Mode mode(LegRole role) const noexcept;
  /// "car->subway->walk"
  std::string label() const;
  /// "car → subway → walk"
  std::string display_label() const;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

/// Every alternative, ids 1..78 in order, parsed from the bundled CSV.
const std::vector<Alternative>& all_alternatives();
/// Alternatives considered under a scenario: 1..35, plus 36..78 when emerging.
std::vector<Alternative> catalog(const Scenario& scenario);
/// Throws Error(precondition_violation) for an unknown id.
const Alternative& alternative(int id);

/// Parses "id,first,middle,last,tier" rows; '#' lines are comments.
/// Throws Error(malformed_dataset).
std::vector<Alternative> parse_catalog_csv(std::string_view text);
std::string_view bundled_catalog_csv();

enum class Violation : std::uint8_t {
  over_weight_bike,
  over_weight_walk,
  over_weight_robot,
  robot_range,
  service_unavailable,
  no_station,
  over_volume,
};

std::string_view to_string(Violation v);

struct FeasibilityVerdict {
  std::vector<Violation> reasons;

  bool feasible() const noexcept { return reasons.empty(); }
  bool has(Violation v) const noexcept;
};

/// Collects every violated restriction. Weight limits apply to every leg of
/// the restricted mode, zero-length ones included.
FeasibilityVerdict feasible(const Alternative& alt, const Order& order, const LegPlan& plan,
                            const ScenarioModel& model);

}  // namespace courier
