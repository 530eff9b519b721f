#pragma once

#include <array>
#include <optional>
#include <vector>

#include "courier/catalog.hpp"
#include "courier/geo_city.hpp"
#include "courier/order.hpp"
#include "courier/params.hpp"
#include "courier/rng.hpp"

namespace courier {

/// Geometry shared by every alternative of one order: zones, direct street
/// distance and the nearest station of each network at both ends.
struct OrderGeometry {
  Order order;
  ZoneId origin_zone = 0;
  ZoneId destination_zone = 0;
  double direct_distance_mi = 0.0;
  std::optional<Station> subway_origin, subway_destination;
  std::optional<Station> air_origin, air_destination;
};

/// Throws Error(out_of_service_area) if either endpoint lies outside the city.
OrderGeometry resolve_geometry(const Order& order, const CityModel& city);

/// Resolves an order and alternative into three contiguous legs. Throws
/// Error(no_such_network) when a station middle has no stations to use.
LegPlan plan_legs(const Order& order, const Alternative& alt, const CityModel& city,
                  const BusAccess& bus = {});
LegPlan plan_legs(const OrderGeometry& geo, const Alternative& alt, const CityModel& city,
                  const BusAccess& bus = {});

using PerLeg = std::array<double, 3>;

/// Sum of leg distance / leg speed. Zero-length legs contribute nothing.
double eval_time(const LegPlan& plan, const PerLeg& speeds_mph);
/// Per-leg travel hours.
PerLeg leg_hours(const LegPlan& plan, const PerLeg& speeds_mph);

struct CostBreakdown {
  double labor = 0.0;
  double operating = 0.0;
  double fares = 0.0;
  double parking = 0.0;

  double total() const noexcept { return labor + operating + fares + parking; }
};

/// Delivery cost of one coherent draw. Labor is paid on every non-robot leg
/// and on every wait; car and bike legs pay per-mile operating cost and park
/// for the rest of the trip (at least the minimum charge); every bus or
/// subway ride with positive length pays one fare; robot and air-taxi legs
/// pay their per-mile rate.
CostBreakdown eval_cost(const LegPlan& plan, const Alternative& alt, const PerLeg& hours,
                        const PerLeg& waits_h, double wage, const CostParams& costs);

/// Pounds of CO2: per-mile coefficient times leg distance, summed.
double eval_emission(const LegPlan& plan, const EmissionParams& emissions);

struct Evaluation {
  int alternative_id = 0;
  bool feasible = false;
  std::vector<Violation> violations;
  // Replication means; all zero for infeasible alternatives.
  double travel_time_h = 0.0;
  double wait_time_h = 0.0;
  double cost_usd = 0.0;
  CostBreakdown cost;
  double co2_lb = 0.0;
  double distance_mi = 0.0;
  LegPlan plan;

  /// Ranking criterion for time: travel plus waiting.
  double delivery_time_h() const noexcept { return travel_time_h + wait_time_h; }
};

enum class Criterion : std::uint8_t { time, cost, co2 };
inline constexpr std::array<Criterion, 3> kAllCriteria = {Criterion::time, Criterion::cost,
                                                          Criterion::co2};
constexpr std::size_t index_of(Criterion c) noexcept { return static_cast<std::size_t>(c); }
std::string_view to_string(Criterion c);

double criterion_value(const Evaluation& e, Criterion c) noexcept;

struct Recommendation {
  int best_time = 0;
  int best_cost = 0;
  int best_co2 = 0;
  Order order;
  TimeBucket bucket = TimeBucket::morning_early_afternoon;
  ZoneId origin_zone = 0;
  ZoneId destination_zone = 0;
  double direct_distance_mi = 0.0;
  int replications = 0;
  /// One entry per catalog alternative, ordered by id.
  std::vector<Evaluation> evaluations;

  int best(Criterion c) const noexcept;
  const Evaluation& evaluation(int alternative_id) const;
};

/// Lowest-id feasible alternative minimising the criterion; 0 if none.
int argmin(const std::vector<Evaluation>& evals, Criterion c);

/// Plans, checks and simulates every alternative of the scenario's catalog.
/// Each replication draws one wage and, per alternative and leg, one speed
/// and one wait from substreams of `rng`, so results depend only on the
/// stream key. Throws Error(no_feasible_alternative) when nothing is
/// feasible and Error(invalid_order) for a malformed order.
Recommendation evaluate_order(const Order& order, const ScenarioModel& model,
                              const CityModel& city, const RngStream& rng, int replications);
Recommendation evaluate_order(const OrderGeometry& geo, const std::vector<Alternative>& alts,
                              const ScenarioModel& model, const CityModel& city,
                              const RngStream& rng, int replications);

}  // namespace courier
