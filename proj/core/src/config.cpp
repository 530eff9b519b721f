#include "courier/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "courier/errors.hpp"

namespace courier {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(ErrorKind::config_error, "'" + path + "' " + why);
}

std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

const json& object_at(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
  return j;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  object_at(j, path);
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      fail(join_path(path, k), "is not a recognised key");
    }
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "must be true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "must be a string");
  return j.get<std::string>();
}

template <typename T, typename F>
void read_if(const json& obj, std::string_view key, const std::string& path, T& out, F reader) {
  if (auto it = obj.find(std::string(key)); it != obj.end()) out = reader(*it, join_path(path, key));
}

void read_num(const json& obj, std::string_view key, const std::string& path, double& out) {
  read_if(obj, key, path, out, number);
}

Mode mode_key(std::string_view key, const std::string& path) {
  const auto m = parse_mode(key);
  if (!m) fail(path, "is not a mode (car, bike, walk, bus, subway, robot, air_taxi)");
  return *m;
}

PerBucket<double> bucket_numbers(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != kBucketCount) {
    fail(path, "must be an array of 4 numbers (early_morning, morning_early_afternoon, "
               "late_afternoon_evening, night)");
  }
  PerBucket<double> out{};
  for (std::size_t i = 0; i < kBucketCount; ++i) out[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

PerBucket<bool> bucket_flags(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != kBucketCount) fail(path, "must be an array of 4 booleans");
  PerBucket<bool> out{};
  for (std::size_t i = 0; i < kBucketCount; ++i) out[i] = boolean(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

SpeedDistribution distribution_of(const std::string& s, const std::string& path) {
  if (s == "normal") return SpeedDistribution::normal;
  if (s == "uniform_band") return SpeedDistribution::uniform_band;
  if (s == "fixed") return SpeedDistribution::fixed;
  fail(path, "must be one of normal, uniform_band, fixed");
}

std::string_view distribution_name(SpeedDistribution d) {
  switch (d) {
    case SpeedDistribution::normal: return "normal";
    case SpeedDistribution::uniform_band: return "uniform_band";
    case SpeedDistribution::fixed: return "fixed";
  }
  return "fixed";
}

void apply_speeds(const json& j, SpeedModel& s) {
  const std::string path = "speeds";
  object_at(j, path);
  for (const auto& [k, v] : j.items()) {
    const std::string p = join_path(path, k);
    if (k == "uniform_band") {
      s.uniform_band = number(v, p);
    } else if (k == "degradation_at_limit") {
      s.degradation_at_limit = number(v, p);
    } else if (k == "min_mph") {
      s.min_mph = number(v, p);
    } else {
      ModeSpeed& ms = s.modes[index_of(mode_key(k, p))];
      only_keys(v, p, {"mean_mph", "sd_mph", "distribution", "degradation_limit_lbs"});
      read_num(v, "mean_mph", p, ms.mean_mph);
      read_num(v, "sd_mph", p, ms.sd_mph);
      read_num(v, "degradation_limit_lbs", p, ms.degradation_limit_lbs);
      if (auto it = v.find("distribution"); it != v.end()) {
        ms.distribution = distribution_of(text(*it, p + ".distribution"), p + ".distribution");
      }
    }
  }
}

void apply_multipliers(const json& j, SpeedModel& s) {
  const std::string path = "zone_multipliers";
  object_at(j, path);
  // The table is replaced as a whole so a file fully describes its zones.
  s.zone_multipliers.clear();
  s.default_multiplier = {1.0, 1.0, 1.0, 1.0};
  for (const auto& [k, v] : j.items()) {
    const std::string p = join_path(path, k);
    if (k == "default") {
      s.default_multiplier = bucket_numbers(v, p);
      continue;
    }
    int zone = 0;
    const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), zone);
    if (ec != std::errc{} || ptr != k.data() + k.size()) fail(p, "must be a zone id or 'default'");
    s.zone_multipliers[zone] = bucket_numbers(v, p);
  }
}

void apply_costs(const json& j, CostParams& c) {
  const std::string p = "costs";
  only_keys(j, p,
            {"subway_fare", "bus_fare", "car_per_mile", "ebike_per_mile", "car_parking_per_hour",
             "bike_parking_per_hour", "min_parking_hours", "robot_per_mile", "air_taxi_per_mile",
             "wage_mean", "wage_sd", "wage_floor"});
  read_num(j, "subway_fare", p, c.subway_fare);
  read_num(j, "bus_fare", p, c.bus_fare);
  read_num(j, "car_per_mile", p, c.car_per_mile);
  read_num(j, "ebike_per_mile", p, c.ebike_per_mile);
  read_num(j, "car_parking_per_hour", p, c.car_parking_per_hour);
  read_num(j, "bike_parking_per_hour", p, c.bike_parking_per_hour);
  read_num(j, "min_parking_hours", p, c.min_parking_hours);
  read_num(j, "robot_per_mile", p, c.robot_per_mile);
  read_num(j, "air_taxi_per_mile", p, c.air_taxi_per_mile);
  read_num(j, "wage_mean", p, c.wage_mean);
  read_num(j, "wage_sd", p, c.wage_sd);
  read_num(j, "wage_floor", p, c.wage_floor);
}

void apply_buckets(const json& j, BucketHours& b) {
  const std::string p = "time_buckets";
  only_keys(j, p, {"early_morning", "morning_early_afternoon", "late_afternoon_evening", "night"});
  read_if(j, "early_morning", p, b.early_morning_start, integer);
  read_if(j, "morning_early_afternoon", p, b.morning_start, integer);
  read_if(j, "late_afternoon_evening", p, b.late_afternoon_start, integer);
  read_if(j, "night", p, b.night_start, integer);
}

void apply_limits(const json& j, FeasibilityLimits& l) {
  const std::string p = "limits";
  only_keys(j, p, {"bike_max_lbs", "walk_max_lbs", "robot_max_lbs", "robot_range_mi", "volume_caps_cuft"});
  read_num(j, "bike_max_lbs", p, l.bike_max_lbs);
  read_num(j, "walk_max_lbs", p, l.walk_max_lbs);
  read_num(j, "robot_max_lbs", p, l.robot_max_lbs);
  read_num(j, "robot_range_mi", p, l.robot_range_mi);
  if (auto it = j.find("volume_caps_cuft"); it != j.end()) {
    const std::string vp = p + ".volume_caps_cuft";
    object_at(*it, vp);
    l.volume_caps_cuft.clear();
    for (const auto& [k, v] : it->items()) {
      l.volume_caps_cuft[mode_key(k, join_path(vp, k))] = number(v, join_path(vp, k));
    }
  }
}

void apply_demand(const json& j, DemandModel& d) {
  const std::string p = "demand";
  only_keys(j, p,
            {"peaks", "background_weight", "light_min_lbs", "light_max_lbs", "heavy_max_lbs",
             "tail_exponent", "volume_min_cuft", "volume_max_cuft"});
  if (auto it = j.find("peaks"); it != j.end()) {
    if (!it->is_array()) fail(p + ".peaks", "must be an array");
    d.peaks.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string pp = p + ".peaks[" + std::to_string(i) + "]";
      const json& pk = (*it)[i];
      only_keys(pk, pp, {"hour", "sd_hours", "weight"});
      DemandPeak peak;
      read_num(pk, "hour", pp, peak.hour);
      read_num(pk, "sd_hours", pp, peak.sd_hours);
      read_num(pk, "weight", pp, peak.weight);
      d.peaks.push_back(peak);
    }
  }
  read_num(j, "background_weight", p, d.background_weight);
  read_num(j, "light_min_lbs", p, d.light_min_lbs);
  read_num(j, "light_max_lbs", p, d.light_max_lbs);
  read_num(j, "heavy_max_lbs", p, d.heavy_max_lbs);
  read_num(j, "tail_exponent", p, d.tail_exponent);
  read_num(j, "volume_min_cuft", p, d.volume_min_cuft);
  read_num(j, "volume_max_cuft", p, d.volume_max_cuft);
}

void apply_pandemic(const json& j, PandemicOverlay& o) {
  const std::string p = "pandemic";
  only_keys(j, p, {"vehicle_mph", "subway_closed"});
  read_num(j, "vehicle_mph", p, o.vehicle_mph);
  if (auto it = j.find("subway_closed"); it != j.end()) {
    if (!it->is_array()) fail(p + ".subway_closed", "must be an array of bucket names");
    o.subway_closed.clear();
    for (const auto& v : *it) {
      const auto b = parse_bucket(text(v, p + ".subway_closed"));
      if (!b) fail(p + ".subway_closed", "names an unknown time bucket");
      o.subway_closed.push_back(*b);
    }
  }
}

Scenario read_scenario(const std::string& name, const json& j) {
  const std::string p = "scenarios." + name;
  only_keys(j, p,
            {"preset", "weight_mix", "pandemic", "emerging", "speed_mean_mph", "service",
             "headway_min"});
  Scenario s;
  if (auto it = j.find("preset"); it != j.end()) {
    const auto preset = find_preset(text(*it, p + ".preset"));
    if (!preset) fail(p + ".preset", "names an unknown preset");
    s = *preset;
  }
  s.name = name;
  read_num(j, "weight_mix", p, s.weight_mix);
  read_if(j, "pandemic", p, s.pandemic, boolean);
  read_if(j, "emerging", p, s.emerging, boolean);
  if (auto it = j.find("speed_mean_mph"); it != j.end()) {
    object_at(*it, p + ".speed_mean_mph");
    for (const auto& [k, v] : it->items()) {
      const std::string kp = p + ".speed_mean_mph." + k;
      s.overrides.speed_mean_mph[mode_key(k, kp)] = number(v, kp);
    }
  }
  if (auto it = j.find("service"); it != j.end()) {
    object_at(*it, p + ".service");
    for (const auto& [k, v] : it->items()) {
      const std::string kp = p + ".service." + k;
      s.overrides.service[mode_key(k, kp)] = bucket_flags(v, kp);
    }
  }
  if (auto it = j.find("headway_min"); it != j.end()) {
    object_at(*it, p + ".headway_min");
    for (const auto& [k, v] : it->items()) {
      const std::string kp = p + ".headway_min." + k;
      s.overrides.headway_min[mode_key(k, kp)] = bucket_numbers(v, kp);
    }
  }
  s.validate();
  return s;
}

std::string location_of(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string num_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

Config load_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // The reported byte is one past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(ErrorKind::config_error,
                "syntax error at " + location_of(json_text, at) + ": " + e.what());
  }
  only_keys(j, "",
            {"city", "stochastic", "speeds", "zone_multipliers", "costs", "emissions",
             "headways_min", "time_buckets", "limits", "bus_access", "demand", "pandemic",
             "scenarios"});
  Config cfg;
  ModelParams& p = cfg.params;
  if (auto it = j.find("city"); it != j.end()) cfg.city_path = text(*it, "city");
  read_if(j, "stochastic", "", p.stochastic, boolean);
  if (auto it = j.find("speeds"); it != j.end()) apply_speeds(*it, p.speed);
  if (auto it = j.find("zone_multipliers"); it != j.end()) apply_multipliers(*it, p.speed);
  if (auto it = j.find("costs"); it != j.end()) apply_costs(*it, p.cost);
  if (auto it = j.find("emissions"); it != j.end()) {
    object_at(*it, "emissions");
    for (const auto& [k, v] : it->items()) {
      p.emission.lb_per_mile[index_of(mode_key(k, "emissions." + k))] = number(v, "emissions." + k);
    }
  }
  if (auto it = j.find("headways_min"); it != j.end()) {
    object_at(*it, "headways_min");
    for (const auto& [k, v] : it->items()) {
      p.headway_min[index_of(mode_key(k, "headways_min." + k))] =
          bucket_numbers(v, "headways_min." + k);
    }
  }
  if (auto it = j.find("time_buckets"); it != j.end()) apply_buckets(*it, p.buckets);
  if (auto it = j.find("limits"); it != j.end()) apply_limits(*it, p.limits);
  if (auto it = j.find("bus_access"); it != j.end()) {
    only_keys(*it, "bus_access", {"max_leg_mi", "fraction"});
    read_num(*it, "max_leg_mi", "bus_access", p.bus_access.max_leg_mi);
    read_num(*it, "fraction", "bus_access", p.bus_access.fraction);
  }
  if (auto it = j.find("demand"); it != j.end()) apply_demand(*it, p.demand);
  if (auto it = j.find("pandemic"); it != j.end()) apply_pandemic(*it, p.pandemic);
  if (auto it = j.find("scenarios"); it != j.end()) {
    object_at(*it, "scenarios");
    for (const auto& [name, v] : it->items()) cfg.scenarios[name] = read_scenario(name, v);
  }
  p.validate();
  return cfg;
}

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config_error, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Config cfg = load_config(buf.str());
  if (cfg.city_path && cfg.city_path->is_relative()) {
    cfg.city_path = path.parent_path() / *cfg.city_path;
  }
  return cfg;
}

std::string default_config_json() {
  const ModelParams p = ModelParams::defaults();
  json j;
  j["stochastic"] = p.stochastic;
  json speeds;
  speeds["uniform_band"] = p.speed.uniform_band;
  speeds["degradation_at_limit"] = p.speed.degradation_at_limit;
  speeds["min_mph"] = p.speed.min_mph;
  for (Mode m : kAllModes) {
    const auto& ms = p.speed.modes[index_of(m)];
    speeds[std::string(to_string(m))] = {{"mean_mph", ms.mean_mph},
                                         {"sd_mph", ms.sd_mph},
                                         {"distribution", distribution_name(ms.distribution)},
                                         {"degradation_limit_lbs", ms.degradation_limit_lbs}};
  }
  j["speeds"] = speeds;
  json mult;
  mult["default"] = p.speed.default_multiplier;
  for (const auto& [zone, row] : p.speed.zone_multipliers) mult[std::to_string(zone)] = row;
  j["zone_multipliers"] = mult;
  const auto& c = p.cost;
  j["costs"] = {{"subway_fare", c.subway_fare},
                {"bus_fare", c.bus_fare},
                {"car_per_mile", c.car_per_mile},
                {"ebike_per_mile", c.ebike_per_mile},
                {"car_parking_per_hour", c.car_parking_per_hour},
                {"bike_parking_per_hour", c.bike_parking_per_hour},
                {"min_parking_hours", c.min_parking_hours},
                {"robot_per_mile", c.robot_per_mile},
                {"air_taxi_per_mile", c.air_taxi_per_mile},
                {"wage_mean", c.wage_mean},
                {"wage_sd", c.wage_sd},
                {"wage_floor", c.wage_floor}};
  json emis, heads;
  for (Mode m : kAllModes) {
    emis[std::string(to_string(m))] = p.emission.lb_per_mile[index_of(m)];
    if (is_transit(m)) heads[std::string(to_string(m))] = p.headway_min[index_of(m)];
  }
  j["emissions"] = emis;
  j["headways_min"] = heads;
  j["time_buckets"] = {{"early_morning", p.buckets.early_morning_start},
                       {"morning_early_afternoon", p.buckets.morning_start},
                       {"late_afternoon_evening", p.buckets.late_afternoon_start},
                       {"night", p.buckets.night_start}};
  j["limits"] = {{"bike_max_lbs", p.limits.bike_max_lbs},
                 {"walk_max_lbs", p.limits.walk_max_lbs},
                 {"robot_max_lbs", p.limits.robot_max_lbs},
                 {"robot_range_mi", p.limits.robot_range_mi},
                 {"volume_caps_cuft", json::object()}};
  j["bus_access"] = {{"max_leg_mi", p.bus_access.max_leg_mi}, {"fraction", p.bus_access.fraction}};
  json peaks = json::array();
  for (const auto& pk : p.demand.peaks) {
    peaks.push_back({{"hour", pk.hour}, {"sd_hours", pk.sd_hours}, {"weight", pk.weight}});
  }
  const auto& d = p.demand;
  j["demand"] = {{"peaks", peaks},
                 {"background_weight", d.background_weight},
                 {"light_min_lbs", d.light_min_lbs},
                 {"light_max_lbs", d.light_max_lbs},
                 {"heavy_max_lbs", d.heavy_max_lbs},
                 {"tail_exponent", d.tail_exponent},
                 {"volume_min_cuft", d.volume_min_cuft},
                 {"volume_max_cuft", d.volume_max_cuft}};
  std::vector<std::string> closed;
  for (TimeBucket b : p.pandemic.subway_closed) closed.emplace_back(to_string(b));
  j["pandemic"] = {{"vehicle_mph", p.pandemic.vehicle_mph}, {"subway_closed", closed}};
  return j.dump(2) + "\n";
}

Scenario resolve_scenario(const Config& config, std::string_view name) {
  if (auto it = config.scenarios.find(std::string(name)); it != config.scenarios.end()) {
    return it->second;
  }
  if (auto preset = find_preset(name)) return *preset;
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  for (const auto& [n, s] : config.scenarios) known += ", " + n;
  throw Error(ErrorKind::config_error,
              "unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<ConfigKeyDoc> config_key_docs() {
  const ModelParams p = ModelParams::defaults();
  const auto& c = p.cost;
  auto mode_speed = [&](Mode m) {
    const auto& ms = p.speed.modes[index_of(m)];
    return num_text(ms.mean_mph) + " / " + num_text(ms.sd_mph);
  };
  auto heads = [&](Mode m) {
    const auto& h = p.headway_min[index_of(m)];
    return num_text(h[0]) + "/" + num_text(h[1]) + "/" + num_text(h[2]) + "/" + num_text(h[3]);
  };
  return {
      {"speeds.<mode>.mean_mph / sd_mph", "car " + mode_speed(Mode::car) + ", subway " +
                                              mode_speed(Mode::subway),
       "mean and spread of each mode's speed"},
      {"speeds.uniform_band", num_text(p.speed.uniform_band), "bike/walk speed band around the mean"},
      {"speeds.degradation_at_limit", num_text(p.speed.degradation_at_limit),
       "speed loss at the mode's weight limit"},
      {"zone_multipliers.<zone>", "1,3,5: 1/0.7/0.7/1.2", "car/bus traffic factor per time bucket"},
      {"costs.subway_fare / bus_fare", num_text(c.subway_fare) + " / " + num_text(c.bus_fare),
       "fare per ride ($)"},
      {"costs.car_per_mile / ebike_per_mile",
       num_text(c.car_per_mile) + " / " + num_text(c.ebike_per_mile), "operating cost ($/mi)"},
      {"costs.car_parking_per_hour / bike_parking_per_hour",
       num_text(c.car_parking_per_hour) + " / " + num_text(c.bike_parking_per_hour),
       "parking rate ($/h)"},
      {"costs.min_parking_hours", num_text(c.min_parking_hours), "minimum parking charge (h)"},
      {"costs.robot_per_mile / air_taxi_per_mile",
       num_text(c.robot_per_mile) + " / " + num_text(c.air_taxi_per_mile),
       "emerging-mode operating cost ($/mi)"},
      {"costs.wage_mean / wage_sd / wage_floor",
       num_text(c.wage_mean) + " / " + num_text(c.wage_sd) + " / " + num_text(c.wage_floor),
       "messenger wage ($/h)"},
      {"emissions.<mode>", "car 0.96, bus 0.64, subway 0.33", "CO2 per mile (lb)"},
      {"headways_min.subway", heads(Mode::subway), "headway per bucket (min)"},
      {"headways_min.bus", heads(Mode::bus), "headway per bucket (min)"},
      {"headways_min.air_taxi", heads(Mode::air_taxi), "headway per bucket (min)"},
      {"time_buckets.<bucket>", "240/420/900/1200", "bucket start minute"},
      {"limits.bike_max_lbs / walk_max_lbs / robot_max_lbs",
       num_text(p.limits.bike_max_lbs) + " / " + num_text(p.limits.walk_max_lbs) + " / " +
           num_text(p.limits.robot_max_lbs),
       "weight limits (lbs)"},
      {"limits.robot_range_mi", num_text(p.limits.robot_range_mi), "robot leg range (mi)"},
      {"bus_access.max_leg_mi / fraction",
       num_text(p.bus_access.max_leg_mi) + " / " + num_text(p.bus_access.fraction),
       "bus access legs"},
      {"demand.tail_exponent", num_text(p.demand.tail_exponent),
       "heavy-package power-law exponent (0 = log-uniform)"},
      {"demand.peaks", "11h and 17h, sd 2.5h", "time-of-day demand profile"},
      {"pandemic.vehicle_mph", num_text(p.pandemic.vehicle_mph), "car/bus speed under pandemic"},
      {"scenarios.<name>", "", "custom scenario (preset, weight_mix, pandemic, emerging, "
                               "speed_mean_mph, service, headway_min)"},
  };
}

}  // namespace courier
