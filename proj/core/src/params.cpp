#include "courier/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "courier/errors.hpp"

namespace courier {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::config_error, "'" + key + "' " + why);
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) bad(key, why);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::car: return "car";
    case Mode::bike: return "bike";
    case Mode::walk: return "walk";
    case Mode::bus: return "bus";
    case Mode::subway: return "subway";
    case Mode::robot: return "robot";
    case Mode::air_taxi: return "air_taxi";
  }
  return "?";
}

std::string_view display_name(Mode mode) {
  return mode == Mode::air_taxi ? std::string_view("air taxi") : to_string(mode);
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string t = lower(text);
  std::replace(t.begin(), t.end(), ' ', '_');
  for (Mode m : kAllModes) {
    if (t == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string_view to_string(TimeBucket bucket) {
  switch (bucket) {
    case TimeBucket::early_morning: return "early_morning";
    case TimeBucket::morning_early_afternoon: return "morning_early_afternoon";
    case TimeBucket::late_afternoon_evening: return "late_afternoon_evening";
    case TimeBucket::night: return "night";
  }
  return "?";
}

std::string_view display_name(TimeBucket bucket) {
  switch (bucket) {
    case TimeBucket::early_morning: return "Early Morning";
    case TimeBucket::morning_early_afternoon: return "Morning & Early Afternoon";
    case TimeBucket::late_afternoon_evening: return "Late Afternoon & Evening";
    case TimeBucket::night: return "Night";
  }
  return "?";
}

std::optional<TimeBucket> parse_bucket(std::string_view text) {
  const std::string t = lower(text);
  for (TimeBucket b : kAllBuckets) {
    if (t == to_string(b)) return b;
  }
  return std::nullopt;
}

TimeBucket BucketHours::bucket_of(int minute_of_day) const noexcept {
  const int m = ((minute_of_day % 1440) + 1440) % 1440;
  if (m >= early_morning_start && m < morning_start) return TimeBucket::early_morning;
  if (m >= morning_start && m < late_afternoon_start) return TimeBucket::morning_early_afternoon;
  if (m >= late_afternoon_start && m < night_start) return TimeBucket::late_afternoon_evening;
  return TimeBucket::night;
}

void BucketHours::validate() const {
  const bool in_day = early_morning_start >= 0 && night_start < 1440;
  require(in_day && early_morning_start < morning_start && morning_start < late_afternoon_start &&
              late_afternoon_start < night_start,
          "time_buckets",
          "must be increasing start times within one day (early_morning < morning < "
          "late_afternoon < night)");
}

double SpeedModel::multiplier(ZoneId zone, TimeBucket bucket) const noexcept {
  auto it = zone_multipliers.find(zone);
  const auto& row = it == zone_multipliers.end() ? default_multiplier : it->second;
  return row[index_of(bucket)];
}

double SpeedModel::degradation(Mode mode, double weight_lbs) const noexcept {
  const double limit = modes[index_of(mode)].degradation_limit_lbs;
  if (limit <= 0.0) return 1.0;
  return 1.0 - degradation_at_limit * (weight_lbs / limit);
}

ModelParams ModelParams::defaults() {
  ModelParams p;
  auto& s = p.speed.modes;
  s[index_of(Mode::car)] = {7.1, 1.3, SpeedDistribution::normal, 0.0};
  s[index_of(Mode::bus)] = {7.1, 1.3, SpeedDistribution::normal, 0.0};
  s[index_of(Mode::subway)] = {17.0, 8.0, SpeedDistribution::normal, 0.0};
  s[index_of(Mode::bike)] = {5.0, 0.5, SpeedDistribution::uniform_band, 300.0};
  s[index_of(Mode::walk)] = {3.5, 0.35, SpeedDistribution::uniform_band, 40.0};
  s[index_of(Mode::robot)] = {4.0, 0.0, SpeedDistribution::fixed, 20.0};
  s[index_of(Mode::air_taxi)] = {170.0, 0.0, SpeedDistribution::fixed, 0.0};

  // Bundled-dataset zone ids: 1 Lower Manhattan, 3 Midtown Manhattan,
  // 5 Hell's Kitchen carry the tourist and office traffic.
  const PerBucket<double> tourist{1.0, 0.7, 0.7, 1.2};
  p.speed.zone_multipliers = {{1, tourist}, {3, tourist}, {5, tourist}};

  auto& e = p.emission.lb_per_mile;
  e.fill(0.0);
  e[index_of(Mode::bus)] = 0.64;
  e[index_of(Mode::car)] = 0.96;
  e[index_of(Mode::subway)] = 0.33;

  for (auto& row : p.headway_min) row.fill(0.0);
  p.headway_min[index_of(Mode::subway)] = {6.0, 6.0, 6.0, 20.0};
  p.headway_min[index_of(Mode::bus)] = {10.0, 10.0, 10.0, 30.0};
  p.headway_min[index_of(Mode::air_taxi)] = {15.0, 15.0, 15.0, 15.0};
  return p;
}

void ModelParams::validate() const {
  for (Mode m : kAllModes) {
    const auto& ms = speed.modes[index_of(m)];
    const std::string key = "speeds." + std::string(to_string(m));
    require(std::isfinite(ms.mean_mph) && ms.mean_mph > 0.0, key + ".mean", "must be > 0");
    require(finite_nonneg(ms.sd_mph), key + ".sd", "must be >= 0");
    require(finite_nonneg(ms.degradation_limit_lbs), key + ".degradation_limit_lbs",
            "must be >= 0");
  }
  require(finite_nonneg(speed.uniform_band) && speed.uniform_band < 1.0, "speeds.uniform_band",
          "must be in [0, 1)");
  require(finite_nonneg(speed.degradation_at_limit) && speed.degradation_at_limit < 1.0,
          "speeds.degradation_at_limit", "must be in [0, 1)");
  require(std::isfinite(speed.min_mph) && speed.min_mph > 0.0, "speeds.min_mph", "must be > 0");
  for (double v : speed.default_multiplier) {
    require(std::isfinite(v) && v > 0.0, "zone_multipliers.default", "entries must be > 0");
  }
  for (const auto& [zone, row] : speed.zone_multipliers) {
    for (double v : row) {
      require(std::isfinite(v) && v > 0.0, "zone_multipliers." + std::to_string(zone),
              "entries must be > 0");
    }
  }
  const std::pair<const char*, double> costs[] = {
      {"costs.subway_fare", cost.subway_fare},
      {"costs.bus_fare", cost.bus_fare},
      {"costs.car_per_mile", cost.car_per_mile},
      {"costs.ebike_per_mile", cost.ebike_per_mile},
      {"costs.car_parking_per_hour", cost.car_parking_per_hour},
      {"costs.bike_parking_per_hour", cost.bike_parking_per_hour},
      {"costs.min_parking_hours", cost.min_parking_hours},
      {"costs.robot_per_mile", cost.robot_per_mile},
      {"costs.air_taxi_per_mile", cost.air_taxi_per_mile},
      {"costs.wage_sd", cost.wage_sd},
      {"costs.wage_floor", cost.wage_floor},
  };
  for (const auto& [key, v] : costs) require(finite_nonneg(v), key, "must be >= 0");
  require(std::isfinite(cost.wage_mean) && cost.wage_mean > 0.0, "costs.wage_mean", "must be > 0");
  for (Mode m : kAllModes) {
    require(finite_nonneg(emission.lb_per_mile[index_of(m)]),
            "emissions." + std::string(to_string(m)), "must be >= 0");
    for (double h : headway_min[index_of(m)]) {
      require(finite_nonneg(h), "headways_min." + std::string(to_string(m)), "must be >= 0");
    }
  }
  buckets.validate();
  require(finite_nonneg(limits.bike_max_lbs), "limits.bike_max_lbs", "must be >= 0");
  require(finite_nonneg(limits.walk_max_lbs), "limits.walk_max_lbs", "must be >= 0");
  require(finite_nonneg(limits.robot_max_lbs), "limits.robot_max_lbs", "must be >= 0");
  require(finite_nonneg(limits.robot_range_mi), "limits.robot_range_mi", "must be >= 0");
  for (const auto& [m, cap] : limits.volume_caps_cuft) {
    require(std::isfinite(cap) && cap > 0.0, "limits.volume_caps_cuft." + std::string(to_string(m)),
            "must be > 0");
  }
  require(finite_nonneg(bus_access.max_leg_mi), "bus_access.max_leg_mi", "must be >= 0");
  require(finite_nonneg(bus_access.fraction) && bus_access.fraction < 0.5, "bus_access.fraction",
          "must be in [0, 0.5)");
  require(!demand.peaks.empty() || demand.background_weight > 0.0, "demand",
          "needs at least one peak or a positive background weight");
  double total = demand.background_weight;
  require(finite_nonneg(demand.background_weight), "demand.background_weight", "must be >= 0");
  for (const auto& pk : demand.peaks) {
    require(finite_nonneg(pk.weight), "demand.peaks.weight", "must be >= 0");
    require(std::isfinite(pk.sd_hours) && pk.sd_hours > 0.0, "demand.peaks.sd_hours", "must be > 0");
    require(std::isfinite(pk.hour) && pk.hour >= 0.0 && pk.hour < 24.0, "demand.peaks.hour",
            "must be in [0, 24)");
    total += pk.weight;
  }
  require(total > 0.0, "demand", "weights must not all be zero");
  require(demand.light_min_lbs >= 1.0 && demand.light_min_lbs < demand.light_max_lbs &&
              demand.light_max_lbs < demand.heavy_max_lbs && demand.heavy_max_lbs <= 350.0,
          "demand.weights", "need 1 <= light_min_lbs < light_max_lbs < heavy_max_lbs <= 350");
  require(finite_nonneg(demand.tail_exponent), "demand.tail_exponent", "must be >= 0");
  require(demand.volume_min_cuft > 0.0 && demand.volume_min_cuft <= demand.volume_max_cuft,
          "demand.volume", "needs 0 < volume_min_cuft <= volume_max_cuft");
  require(std::isfinite(pandemic.vehicle_mph) && pandemic.vehicle_mph > 0.0,
          "pandemic.vehicle_mph", "must be > 0");
}

void Scenario::validate() const {
  require(weight_mix > 0.0 && weight_mix < 1.0, "scenarios." + name + ".weight_mix",
          "must lie strictly between 0 and 1");
  for (const auto& [m, v] : overrides.speed_mean_mph) {
    require(std::isfinite(v) && v > 0.0,
            "scenarios." + name + ".speed_mean_mph." + std::string(to_string(m)), "must be > 0");
  }
  for (const auto& [m, row] : overrides.headway_min) {
    for (double h : row) {
      require(finite_nonneg(h), "scenarios." + name + ".headway_min." + std::string(to_string(m)),
              "must be >= 0");
    }
  }
}

std::vector<std::string> preset_names() {
  return {"base", "ws1", "ws2", "ws3", "ws4", "pandemic", "emerging"};
}

std::optional<Scenario> find_preset(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  if (name == "base" || name == "ws3") {
    s.weight_mix = 0.50;
  } else if (name == "ws1") {
    s.weight_mix = 0.15;
  } else if (name == "ws2") {
    s.weight_mix = 0.35;
  } else if (name == "ws4") {
    s.weight_mix = 0.85;
  } else if (name == "pandemic") {
    s.pandemic = true;
  } else if (name == "emerging") {
    s.emerging = true;
  } else {
    return std::nullopt;
  }
  return s;
}

ScenarioModel::ScenarioModel(ModelParams params, Scenario scenario)
    : params_(std::move(params)), scenario_(std::move(scenario)) {
  params_.validate();
  scenario_.validate();
  for (Mode m : kAllModes) {
    zone_scaled_[index_of(m)] = (m == Mode::car || m == Mode::bus);
    service_[index_of(m)].fill(true);
    headway_[index_of(m)] = params_.headway_min[index_of(m)];
  }
  if (scenario_.pandemic) {
    for (Mode m : {Mode::car, Mode::bus}) {
      params_.speed.modes[index_of(m)].mean_mph = params_.pandemic.vehicle_mph;
      zone_scaled_[index_of(m)] = false;
    }
    for (TimeBucket b : params_.pandemic.subway_closed) {
      service_[index_of(Mode::subway)][index_of(b)] = false;
    }
  }
  for (const auto& [m, v] : scenario_.overrides.speed_mean_mph) {
    params_.speed.modes[index_of(m)].mean_mph = v;
    zone_scaled_[index_of(m)] = false;
  }
  for (const auto& [m, row] : scenario_.overrides.service) service_[index_of(m)] = row;
  for (const auto& [m, row] : scenario_.overrides.headway_min) headway_[index_of(m)] = row;
}

bool ScenarioModel::service_available(Mode mode, TimeBucket bucket) const noexcept {
  return service_[index_of(mode)][index_of(bucket)];
}

double ScenarioModel::headway_minutes(Mode mode, TimeBucket bucket) const noexcept {
  return headway_[index_of(mode)][index_of(bucket)];
}

double ScenarioModel::mean_speed(Mode mode, TimeBucket bucket, ZoneId from,
                                 ZoneId to) const noexcept {
  const double base = params_.speed.modes[index_of(mode)].mean_mph;
  if (!zone_scaled_[index_of(mode)]) return base;
  const auto& sm = params_.speed;
  return base * 0.5 * (sm.multiplier(from, bucket) + sm.multiplier(to, bucket));
}

double sample_speed(Mode mode, TimeBucket bucket, ZoneId from, ZoneId to, double weight_lbs,
                    const ScenarioModel& model, RngStream& rng) {
  const auto& sm = model.params().speed;
  const auto& spec = sm.modes[index_of(mode)];
  const double mean = model.mean_speed(mode, bucket, from, to);
  double v = mean;
  if (model.stochastic()) {
    switch (spec.distribution) {
      case SpeedDistribution::normal:
        v = rng.normal(mean, spec.sd_mph);
        break;
      case SpeedDistribution::uniform_band:
        v = rng.uniform(mean * (1.0 - sm.uniform_band), mean * (1.0 + sm.uniform_band));
        break;
      case SpeedDistribution::fixed:
        break;
    }
  }
  v *= sm.degradation(mode, weight_lbs);
  return std::max(v, sm.min_mph);
}

double sample_speed(Mode mode, TimeBucket bucket, ZoneId zone, double weight_lbs,
                    const ScenarioModel& model, RngStream& rng) {
  return sample_speed(mode, bucket, zone, zone, weight_lbs, model, rng);
}

double sample_wage(const ScenarioModel& model, RngStream& rng) {
  const auto& c = model.params().cost;
  if (!model.stochastic()) return std::max(c.wage_mean, c.wage_floor);
  return std::max(rng.normal(c.wage_mean, c.wage_sd), c.wage_floor);
}

double waiting_time(Mode mode, TimeBucket bucket, const ScenarioModel& model, RngStream& rng) {
  if (!is_transit(mode)) {
    throw Error(ErrorKind::precondition_violation,
                "waiting time is defined only for bus, subway and air taxi, not " +
                    std::string(to_string(mode)));
  }
  if (!model.service_available(mode, bucket)) {
    throw Error(ErrorKind::service_unavailable, std::string(to_string(mode)) +
                                                    " does not operate during " +
                                                    std::string(to_string(bucket)));
  }
  const double headway_h = model.headway_minutes(mode, bucket) / 60.0;
  if (!model.stochastic()) return 0.5 * headway_h;
  return rng.uniform(0.0, headway_h);
}

}  // namespace courier
