#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "courier/config.hpp"
#include "courier/errors.hpp"
#include "courier_test.hpp"

namespace courier {
namespace {

std::string config_error(std::string_view text) {
  try {
    load_config(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config_error);
    return e.what();
  }
  ADD_FAILURE() << "config loaded without error";
  return {};
}

TEST(Config, DefaultDumpLoadsBackToDefaults) {
  const Config cfg = load_config(default_config_json());
  const ModelParams d = ModelParams::defaults();
  EXPECT_EQ(default_config_json(), default_config_json());
  EXPECT_EQ(cfg.params.cost.car_per_mile, d.cost.car_per_mile);
  EXPECT_EQ(cfg.params.cost.robot_per_mile, d.cost.robot_per_mile);
  EXPECT_EQ(cfg.params.headway_min, d.headway_min);
  EXPECT_EQ(cfg.params.buckets, d.buckets);
  EXPECT_EQ(cfg.params.speed.zone_multipliers, d.speed.zone_multipliers);
  EXPECT_EQ(cfg.params.emission.lb_per_mile, d.emission.lb_per_mile);
  EXPECT_EQ(cfg.params.demand.tail_exponent, d.demand.tail_exponent);
  EXPECT_EQ(cfg.params.speed.modes[index_of(Mode::subway)].sd_mph, 8.0);
  EXPECT_TRUE(cfg.params.stochastic);
  EXPECT_TRUE(cfg.scenarios.empty());
}

TEST(Config, OverridesApply) {
  const Config cfg = load_config(R"({
    "costs": {"subway_fare": 3.0},
    "headways_min": {"bus": [8, 8, 8, 20]},
    "zone_multipliers": {"4": [0.9, 0.8, 0.8, 1.1]},
    "stochastic": false
  })");
  EXPECT_EQ(cfg.params.cost.subway_fare, 3.0);
  EXPECT_EQ(cfg.params.cost.bus_fare, 2.75);
  EXPECT_EQ(cfg.params.headway_min[index_of(Mode::bus)][3], 20.0);
  EXPECT_EQ(cfg.params.speed.multiplier(4, TimeBucket::night), 1.1);
  // Supplying the table replaces it.
  EXPECT_EQ(cfg.params.speed.multiplier(3, TimeBucket::night), 1.0);
  EXPECT_FALSE(cfg.params.stochastic);
}

TEST(Config, CustomScenario) {
  const Config cfg = load_config(R"({"scenarios": {"lockdown": {
      "preset": "pandemic", "weight_mix": 0.3,
      "speed_mean_mph": {"car": 30}, "headway_min": {"subway": [12, 12, 12, 30]}}}})");
  const Scenario s = resolve_scenario(cfg, "lockdown");
  EXPECT_EQ(s.name, "lockdown");
  EXPECT_TRUE(s.pandemic);
  EXPECT_DOUBLE_EQ(s.weight_mix, 0.3);
  const ScenarioModel m(cfg.params, s);
  EXPECT_DOUBLE_EQ(m.mean_speed(Mode::car, TimeBucket::night, 3, 3), 30.0);
  EXPECT_DOUBLE_EQ(m.headway_minutes(Mode::subway, TimeBucket::morning_early_afternoon), 12.0);
  EXPECT_EQ(resolve_scenario(cfg, "ws2").weight_mix, 0.35);
  EXPECT_THROW(resolve_scenario(cfg, "unknown"), Error);
}

TEST(Config, UnknownKeysAreNamed) {
  EXPECT_NE(config_error(R"({"costs": {"taxi_fare": 3}})").find("costs.taxi_fare"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(config_error(R"({"scenarios": {"x": {"preset": "nope"}}})").find("scenarios.x.preset"),
            std::string::npos);
}

TEST(Config, BadValuesAreNamed) {
  EXPECT_NE(config_error(R"({"costs": {"car_per_mile": -2}})").find("costs.car_per_mile"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"costs": {"car_per_mile": "cheap"}})").find("costs.car_per_mile"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"scenarios": {"s": {"weight_mix": 1.5}}})").find("weight_mix"),
            std::string::npos);
}

TEST(Config, SyntaxErrorsCarryLineAndColumn) {
  const std::string msg = config_error("{\n  \"costs\": {\n    \"bus_fare\": ,\n  }\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(Config, RelativeCityPathResolvesAgainstFile) {
  const auto dir = std::filesystem::temp_directory_path() / "courier_config_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "config.json";
  std::ofstream(file) << R"({"city": "cities/small.json"})";
  const Config cfg = load_config_file(file);
  ASSERT_TRUE(cfg.city_path.has_value());
  EXPECT_EQ(*cfg.city_path, dir / "cities/small.json");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_config_file(dir / "missing.json"), Error);
}

TEST(Config, KeyDocsCoverCalibrationKnobs) {
  std::string all;
  for (const auto& d : config_key_docs()) all += d.key + "\n";
  for (const char* k : {"costs.subway_fare", "costs.car_parking_per_hour", "headways_min.subway",
                        "zone_multipliers", "limits.bike_max_lbs", "pandemic.vehicle_mph"}) {
    EXPECT_NE(all.find(k), std::string::npos) << k;
  }
}

}  // namespace
}  // namespace courier
