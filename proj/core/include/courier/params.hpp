#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "courier/geo_city.hpp"
#include "courier/rng.hpp"

namespace courier {

enum class Mode : std::uint8_t { car, bike, walk, bus, subway, robot, air_taxi };

inline constexpr std::size_t kModeCount = 7;
inline constexpr std::array<Mode, kModeCount> kAllModes = {
    Mode::car, Mode::bike, Mode::walk, Mode::bus, Mode::subway, Mode::robot, Mode::air_taxi};

constexpr std::size_t index_of(Mode m) noexcept { return static_cast<std::size_t>(m); }

/// Identifier form ("air_taxi").
std::string_view to_string(Mode mode);
/// Human form used in tables ("air taxi").
std::string_view display_name(Mode mode);
/// Accepts identifier or human form, case-insensitive.
std::optional<Mode> parse_mode(std::string_view text);

/// Modes whose legs involve boarding a scheduled vehicle.
constexpr bool is_transit(Mode m) noexcept {
  return m == Mode::bus || m == Mode::subway || m == Mode::air_taxi;
}

enum class TimeBucket : std::uint8_t {
  early_morning,
  morning_early_afternoon,
  late_afternoon_evening,
  night,
};

inline constexpr std::size_t kBucketCount = 4;
inline constexpr std::array<TimeBucket, kBucketCount> kAllBuckets = {
    TimeBucket::early_morning, TimeBucket::morning_early_afternoon,
    TimeBucket::late_afternoon_evening, TimeBucket::night};

constexpr std::size_t index_of(TimeBucket b) noexcept { return static_cast<std::size_t>(b); }

std::string_view to_string(TimeBucket bucket);
std::string_view display_name(TimeBucket bucket);
std::optional<TimeBucket> parse_bucket(std::string_view text);

template <typename T>
using PerBucket = std::array<T, kBucketCount>;
template <typename T>
using PerMode = std::array<T, kModeCount>;

/// Start minute (since midnight) of each bucket. Night wraps past midnight
/// back to the early-morning start, so the four buckets partition the day.
struct BucketHours {
  int early_morning_start = 4 * 60;
  int morning_start = 7 * 60;
  int late_afternoon_start = 15 * 60;
  int night_start = 20 * 60;

  TimeBucket bucket_of(int minute_of_day) const noexcept;
  void validate() const;

  friend bool operator==(const BucketHours&, const BucketHours&) = default;
};

enum class SpeedDistribution : std::uint8_t { normal, uniform_band, fixed };

struct ModeSpeed {
  double mean_mph = 1.0;
  double sd_mph = 0.0;
  SpeedDistribution distribution = SpeedDistribution::fixed;
  /// Weight at which speed has dropped by `degradation_at_limit`; 0 disables
  /// weight dependence.
  double degradation_limit_lbs = 0.0;
};

struct SpeedModel {
  PerMode<ModeSpeed> modes{};
  /// Half-width of the uniform band, as a fraction of the mean.
  double uniform_band = 0.10;
  double degradation_at_limit = 0.5;
  double min_mph = 0.5;
  /// Car and bus traffic multipliers per (zone, bucket).
  std::map<ZoneId, PerBucket<double>> zone_multipliers;
  PerBucket<double> default_multiplier{1.0, 1.0, 1.0, 1.0};

  double multiplier(ZoneId zone, TimeBucket bucket) const noexcept;
  /// 1 - degradation_at_limit * weight / limit for weight-sensitive modes.
  double degradation(Mode mode, double weight_lbs) const noexcept;
};

/// Monetary knobs. Fares, per-mile operating costs and parking rates are
/// calibration constants; the wage distribution follows the observed
/// messenger salary.
struct CostParams {
  double subway_fare = 2.75;
  double bus_fare = 2.75;
  double car_per_mile = 0.60;
  double ebike_per_mile = 0.05;
  double car_parking_per_hour = 8.0;
  double bike_parking_per_hour = 0.50;
  double min_parking_hours = 1.0;
  double robot_per_mile = 6.00;
  double air_taxi_per_mile = 6.00;
  double wage_mean = 13.37;
  double wage_sd = 3.0;
  double wage_floor = 7.25;
};

struct EmissionParams {
  /// Pounds of CO2 per passenger mile.
  PerMode<double> lb_per_mile{};
};

struct FeasibilityLimits {
  double bike_max_lbs = 300.0;
  double walk_max_lbs = 40.0;
  double robot_max_lbs = 20.0;
  double robot_range_mi = 3.5;
  /// Optional per-mode volume caps (cubic feet); empty means unchecked.
  std::map<Mode, double> volume_caps_cuft;
};

/// Bus middle legs run between virtual stops placed along the direct path;
/// each access leg covers min(max_leg_mi, fraction * direct distance).
struct BusAccess {
  double max_leg_mi = 0.25;
  double fraction = 0.10;
};

struct DemandPeak {
  double hour = 12.0;
  double sd_hours = 2.5;
  double weight = 1.0;
};

struct DemandModel {
  std::vector<DemandPeak> peaks{{11.0, 2.5, 0.45}, {17.0, 2.5, 0.45}};
  /// Probability mass spread uniformly over the day.
  double background_weight = 0.10;
  double light_min_lbs = 1.0;
  double light_max_lbs = 5.0;
  double heavy_max_lbs = 350.0;
  /// Heavy packages follow a bounded power law on (light_max, heavy_max] with
  /// density proportional to w^-(1 + exponent); 0 gives log-uniform.
  double tail_exponent = 0.5;
  double volume_min_cuft = 0.05;
  double volume_max_cuft = 4.0;
};

struct PandemicOverlay {
  double vehicle_mph = 52.0;
  std::vector<TimeBucket> subway_closed{TimeBucket::night, TimeBucket::early_morning};
};

struct ModelParams {
  SpeedModel speed;
  CostParams cost;
  EmissionParams emission;
  PerMode<PerBucket<double>> headway_min{};
  BucketHours buckets;
  FeasibilityLimits limits;
  BusAccess bus_access;
  DemandModel demand;
  PandemicOverlay pandemic;
  /// When false every sampler returns its mean (exact-oracle mode).
  bool stochastic = true;

  static ModelParams defaults();
  /// Throws Error(config_error) naming the offending key.
  void validate() const;
};

struct ScenarioOverrides {
  /// Absolute mean speed; replaces the base mean and the zone multiplier.
  std::map<Mode, double> speed_mean_mph;
  std::map<Mode, PerBucket<bool>> service;
  std::map<Mode, PerBucket<double>> headway_min;
};

struct Scenario {
  std::string name = "base";
  /// Fraction of packages under the light-weight bound (5 lbs by default).
  double weight_mix = 0.50;
  bool pandemic = false;
  bool emerging = false;
  ScenarioOverrides overrides;

  void validate() const;
};

/// Named presets: base, ws1, ws2, ws3, ws4, pandemic, emerging.
std::vector<std::string> preset_names();
std::optional<Scenario> find_preset(std::string_view name);

/// Parameters with a scenario's overlays applied. Immutable; safe to share.
class ScenarioModel {
 public:
  ScenarioModel(ModelParams params, Scenario scenario);

  const ModelParams& params() const noexcept { return params_; }
  const Scenario& scenario() const noexcept { return scenario_; }
  bool stochastic() const noexcept { return params_.stochastic; }

  bool service_available(Mode mode, TimeBucket bucket) const noexcept;
  double headway_minutes(Mode mode, TimeBucket bucket) const noexcept;
  /// Mean speed before weight degradation. Car/bus use the average of the
  /// two zones' multipliers unless the scenario fixes their mean.
  double mean_speed(Mode mode, TimeBucket bucket, ZoneId from, ZoneId to) const noexcept;

 private:
  ModelParams params_;
  Scenario scenario_;
  PerMode<bool> zone_scaled_{};
  PerMode<PerBucket<bool>> service_{};
  PerMode<PerBucket<double>> headway_{};
};

/// Leg speed in mph, clamped to at least SpeedModel::min_mph.
double sample_speed(Mode mode, TimeBucket bucket, ZoneId from, ZoneId to, double weight_lbs,
                    const ScenarioModel& model, RngStream& rng);
double sample_speed(Mode mode, TimeBucket bucket, ZoneId zone, double weight_lbs,
                    const ScenarioModel& model, RngStream& rng);

/// Messenger wage ($/h): normal(mean, sd) clamped at the wage floor.
double sample_wage(const ScenarioModel& model, RngStream& rng);

/// Waiting time in hours, uniform over one headway. Throws
/// Error(precondition_violation) for non-transit modes and
/// Error(service_unavailable) when the mode does not run in `bucket`.
double waiting_time(Mode mode, TimeBucket bucket, const ScenarioModel& model, RngStream& rng);

}  // namespace courier
