#include "courier/engine.hpp"

#include <algorithm>
#include <cmath>

#include "courier/errors.hpp"

namespace courier {

namespace {

// Substream tags under a replication stream. A leg's draws are keyed by what
// the leg physically is (role, mode and the kind of middle that fixes its
// endpoints), so alternatives sharing a leg share its speed and wait within
// a replication and are compared on common random numbers.
constexpr std::uint64_t kWageTag = 1;
constexpr std::uint64_t kLegTagBase = 16;

std::uint64_t geometry_class(const Alternative& alt) {
  if (alt.single_mode()) return 0;
  if (alt.middle == Mode::subway) return 1;
  if (alt.middle == Mode::air_taxi) return 2;
  return 3;
}

constexpr std::size_t kLegTagCount = 4 * 3 * 8;

std::uint64_t leg_tag(const Alternative& alt, std::size_t leg) {
  const std::uint64_t mode = index_of(alt.mode(kAllLegs[leg]));
  return kLegTagBase + (geometry_class(alt) * 3 + leg) * 8 + mode;
}

GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t) {
  return {a.lat + (b.lat - a.lat) * t, a.lon + (b.lon - a.lon) * t};
}

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorKind::invalid_order, why); }

bool valid_point(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

}  // namespace

void validate_order(const Order& o) {
  if (!valid_point(o.origin)) invalid("origin must have lat in [-90, 90] and lon in [-180, 180]");
  if (!valid_point(o.destination)) {
    invalid("destination must have lat in [-90, 90] and lon in [-180, 180]");
  }
  if (o.origin == o.destination) invalid("origin and destination must differ");
  if (!(o.weight_lbs >= kMinOrderWeightLbs && o.weight_lbs <= kMaxOrderWeightLbs)) {
    invalid("weight must lie between 1 and 350 lbs");
  }
  if (!(std::isfinite(o.volume_cuft) && o.volume_cuft > 0.0)) invalid("volume must be > 0");
  if (o.time_of_day_min < 0 || o.time_of_day_min >= 1440) {
    invalid("time of day must lie in [0, 1440) minutes");
  }
}

OrderGeometry resolve_geometry(const Order& order, const CityModel& city) {
  OrderGeometry g;
  g.order = order;
  g.origin_zone = city.zone_of(order.origin);
  g.destination_zone = city.zone_of(order.destination);
  g.direct_distance_mi = city.travel_distance(order.origin, order.destination);
  if (city.has_network(Network::subway)) {
    g.subway_origin = city.nearest_station(order.origin, Network::subway);
    g.subway_destination = city.nearest_station(order.destination, Network::subway);
  }
  if (city.has_network(Network::air_taxi)) {
    g.air_origin = city.nearest_station(order.origin, Network::air_taxi);
    g.air_destination = city.nearest_station(order.destination, Network::air_taxi);
  }
  return g;
}

LegPlan plan_legs(const Order& order, const Alternative& alt, const CityModel& city,
                  const BusAccess& bus) {
  return plan_legs(resolve_geometry(order, city), alt, city, bus);
}

LegPlan plan_legs(const OrderGeometry& g, const Alternative& alt, const CityModel& city,
                  const BusAccess& bus) {
  const GeoPoint& o = g.order.origin;
  const GeoPoint& d = g.order.destination;
  const ZoneId oz = g.origin_zone;
  const ZoneId dz = g.destination_zone;
  LegPlan p;
  auto& [first, middle, last] = p.legs;
  first.mode = alt.first;
  middle.mode = alt.middle;
  last.mode = alt.last;

  if (alt.single_mode()) {
    first.start = first.end = o;
    first.from_zone = first.to_zone = oz;
    middle.start = o;
    middle.end = d;
    middle.distance_mi = g.direct_distance_mi;
    middle.from_zone = oz;
    middle.to_zone = dz;
    last.start = last.end = d;
    last.from_zone = last.to_zone = dz;
    return p;
  }

  if (alt.middle == Mode::subway || alt.middle == Mode::air_taxi) {
    const bool subway = alt.middle == Mode::subway;
    const auto& board = subway ? g.subway_origin : g.air_origin;
    const auto& alight = subway ? g.subway_destination : g.air_destination;
    if (!board || !alight) {
      throw Error(ErrorKind::no_such_network,
                  "city '" + city.name() + "' has no " +
                      std::string(to_string(subway ? Network::subway : Network::air_taxi)) +
                      " stations");
    }
    p.board_station = board->id;
    p.alight_station = alight->id;
    first.start = o;
    first.end = board->location;
    first.distance_mi = city.travel_distance(o, board->location);
    first.from_zone = oz;
    first.to_zone = board->zone;
    // Rail and air run point to point between stations.
    middle.start = board->location;
    middle.end = alight->location;
    middle.distance_mi = great_circle_miles(board->location, alight->location);
    middle.from_zone = board->zone;
    middle.to_zone = alight->zone;
    last.start = alight->location;
    last.end = d;
    last.distance_mi = city.travel_distance(alight->location, d);
    last.from_zone = alight->zone;
    last.to_zone = dz;
    return p;
  }

  // Road middles (bus, car) ride between virtual stops on the direct path.
  const double direct = g.direct_distance_mi;
  const double access = std::min(bus.max_leg_mi, bus.fraction * direct);
  const double t = direct > 0.0 ? access / direct : 0.0;
  const GeoPoint a = lerp(o, d, t);
  const GeoPoint b = lerp(o, d, 1.0 - t);
  first.start = o;
  first.end = a;
  first.distance_mi = access;
  first.from_zone = first.to_zone = oz;
  middle.start = a;
  middle.end = b;
  middle.distance_mi = std::max(0.0, direct - 2.0 * access);
  middle.from_zone = oz;
  middle.to_zone = dz;
  last.start = b;
  last.end = d;
  last.distance_mi = access;
  last.from_zone = last.to_zone = dz;
  return p;
}

PerLeg leg_hours(const LegPlan& plan, const PerLeg& speeds_mph) {
  PerLeg h{};
  for (std::size_t i = 0; i < 3; ++i) {
    const double dist = plan.legs[i].distance_mi;
    h[i] = dist > 0.0 ? dist / speeds_mph[i] : 0.0;
  }
  return h;
}

double eval_time(const LegPlan& plan, const PerLeg& speeds_mph) {
  const PerLeg h = leg_hours(plan, speeds_mph);
  return h[0] + h[1] + h[2];
}

CostBreakdown eval_cost(const LegPlan& plan, const Alternative& /*alt*/, const PerLeg& hours,
                        const PerLeg& waits_h, double wage, const CostParams& c) {
  CostBreakdown out;
  const double trip_h = hours[0] + hours[1] + hours[2] + waits_h[0] + waits_h[1] + waits_h[2];
  for (std::size_t i = 0; i < 3; ++i) {
    const Leg& leg = plan.legs[i];
    const double dist = leg.distance_mi;
    if (leg.mode != Mode::robot) out.labor += wage * (hours[i] + waits_h[i]);
    switch (leg.mode) {
      case Mode::car:
        out.operating += c.car_per_mile * dist;
        if (dist > 0.0) {
          out.parking += c.car_parking_per_hour * std::max(c.min_parking_hours, trip_h - hours[i]);
        }
        break;
      case Mode::bike:
        out.operating += c.ebike_per_mile * dist;
        if (dist > 0.0) {
          out.parking += c.bike_parking_per_hour * std::max(c.min_parking_hours, trip_h - hours[i]);
        }
        break;
      case Mode::bus:
        if (dist > 0.0) out.fares += c.bus_fare;
        break;
      case Mode::subway:
        if (dist > 0.0) out.fares += c.subway_fare;
        break;
      case Mode::robot:
        out.operating += c.robot_per_mile * dist;
        break;
      case Mode::air_taxi:
        out.operating += c.air_taxi_per_mile * dist;
        break;
      case Mode::walk:
        break;
    }
  }
  return out;
}

double eval_emission(const LegPlan& plan, const EmissionParams& e) {
  double lb = 0.0;
  for (const auto& leg : plan.legs) lb += e.lb_per_mile[index_of(leg.mode)] * leg.distance_mi;
  return lb;
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::time: return "time";
    case Criterion::cost: return "cost";
    case Criterion::co2: return "co2";
  }
  return "?";
}

double criterion_value(const Evaluation& e, Criterion c) noexcept {
  switch (c) {
    case Criterion::time: return e.delivery_time_h();
    case Criterion::cost: return e.cost_usd;
    case Criterion::co2: return e.co2_lb;
  }
  return 0.0;
}

int argmin(const std::vector<Evaluation>& evals, Criterion c) {
  int best = 0;
  double best_value = 0.0;
  for (const auto& e : evals) {
    if (!e.feasible) continue;
    const double v = criterion_value(e, c);
    if (best == 0 || v < best_value || (v == best_value && e.alternative_id < best)) {
      best = e.alternative_id;
      best_value = v;
    }
  }
  return best;
}

int Recommendation::best(Criterion c) const noexcept {
  switch (c) {
    case Criterion::time: return best_time;
    case Criterion::cost: return best_cost;
    case Criterion::co2: return best_co2;
  }
  return 0;
}

const Evaluation& Recommendation::evaluation(int alternative_id) const {
  for (const auto& e : evaluations) {
    if (e.alternative_id == alternative_id) return e;
  }
  throw Error(ErrorKind::precondition_violation,
              "alternative " + std::to_string(alternative_id) + " was not evaluated");
}

Recommendation evaluate_order(const Order& order, const ScenarioModel& model,
                              const CityModel& city, const RngStream& rng, int replications) {
  validate_order(order);
  return evaluate_order(resolve_geometry(order, city), catalog(model.scenario()), model, city,
                        rng, replications);
}

Recommendation evaluate_order(const OrderGeometry& geo, const std::vector<Alternative>& alts,
                              const ScenarioModel& model, const CityModel& city,
                              const RngStream& rng, int replications) {
  if (replications < 1) {
    throw Error(ErrorKind::precondition_violation, "replications must be >= 1");
  }
  const Order& order = geo.order;
  const ModelParams& params = model.params();
  const TimeBucket bucket = params.buckets.bucket_of(order.time_of_day_min);

  Recommendation rec;
  rec.order = order;
  rec.bucket = bucket;
  rec.origin_zone = geo.origin_zone;
  rec.destination_zone = geo.destination_zone;
  rec.direct_distance_mi = geo.direct_distance_mi;
  rec.replications = replications;
  rec.evaluations.resize(alts.size());

  for (std::size_t i = 0; i < alts.size(); ++i) {
    const Alternative& alt = alts[i];
    Evaluation& e = rec.evaluations[i];
    e.alternative_id = alt.id;
    try {
      e.plan = plan_legs(geo, alt, city, params.bus_access);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::no_such_network) throw;
      e.plan = LegPlan{};
      for (std::size_t l = 0; l < 3; ++l) e.plan.legs[l].mode = alt.mode(kAllLegs[l]);
      e.plan.stations_resolved = false;
    }
    const FeasibilityVerdict verdict = feasible(alt, order, e.plan, model);
    e.feasible = verdict.feasible();
    e.violations = verdict.reasons;
  }

  // Without variance every replication is identical.
  const int reps = model.stochastic() ? replications : 1;
  // A shared leg is sampled once per replication and reused by every
  // alternative containing it; the draws are the same either way.
  std::array<double, kLegTagCount> speed_memo{}, wait_memo{};
  std::array<int, kLegTagCount> memo_rep;
  memo_rep.fill(-1);
  for (int r = 0; r < reps; ++r) {
    const RngStream rep = rng.derive(static_cast<std::uint64_t>(r));
    RngStream wage_stream = rep.derive(kWageTag);
    const double wage = sample_wage(model, wage_stream);
    for (std::size_t i = 0; i < alts.size(); ++i) {
      Evaluation& e = rec.evaluations[i];
      if (!e.feasible) continue;
      PerLeg speeds{}, waits{};
      for (std::size_t l = 0; l < 3; ++l) {
        const Leg& leg = e.plan.legs[l];
        if (leg.distance_mi <= 0.0) {
          speeds[l] = 1.0;
          continue;
        }
        const std::uint64_t tag = leg_tag(alts[i], l);
        const std::size_t slot = tag - kLegTagBase;
        if (memo_rep[slot] != r) {
          RngStream s = rep.derive(tag);
          speed_memo[slot] = sample_speed(leg.mode, bucket, leg.from_zone, leg.to_zone,
                                          order.weight_lbs, model, s);
          wait_memo[slot] = is_transit(leg.mode) ? waiting_time(leg.mode, bucket, model, s) : 0.0;
          memo_rep[slot] = r;
        }
        speeds[l] = speed_memo[slot];
        waits[l] = wait_memo[slot];
      }
      const PerLeg hours = leg_hours(e.plan, speeds);
      const CostBreakdown c = eval_cost(e.plan, alts[i], hours, waits, wage, params.cost);
      e.travel_time_h += hours[0] + hours[1] + hours[2];
      e.wait_time_h += waits[0] + waits[1] + waits[2];
      e.cost.labor += c.labor;
      e.cost.operating += c.operating;
      e.cost.fares += c.fares;
      e.cost.parking += c.parking;
    }
  }

  const double inv = 1.0 / reps;
  bool any = false;
  for (Evaluation& e : rec.evaluations) {
    if (!e.feasible) continue;
    any = true;
    e.travel_time_h *= inv;
    e.wait_time_h *= inv;
    e.cost.labor *= inv;
    e.cost.operating *= inv;
    e.cost.fares *= inv;
    e.cost.parking *= inv;
    e.cost_usd = e.cost.total();
    e.co2_lb = eval_emission(e.plan, params.emission);
    e.distance_mi = e.plan.total_distance();
  }
  if (!any) {
    throw Error(ErrorKind::no_feasible_alternative,
                "no alternative can carry this order (weight " + std::to_string(order.weight_lbs) +
                    " lbs)");
  }
  rec.best_time = argmin(rec.evaluations, Criterion::time);
  rec.best_cost = argmin(rec.evaluations, Criterion::cost);
  rec.best_co2 = argmin(rec.evaluations, Criterion::co2);
  return rec;
}

}  // namespace courier
