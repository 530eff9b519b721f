#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "courier/engine.hpp"
#include "courier/geo_city.hpp"
#include "courier/params.hpp"
#include "courier/rng.hpp"

namespace courier {

struct StudyConfig {
  Scenario scenario;
  std::size_t orders = 10'000;
  int replications = 30;
  std::uint64_t seed = 0;
  /// Upper edges of the distance bins in miles; the last bin is open.
  std::vector<double> bin_edges{1, 2, 3, 4, 5, 6, 7};
  /// 0 picks std::thread::hardware_concurrency(). Never affects results.
  unsigned workers = 0;

  /// Throws Error(config_error).
  void validate() const;
};

/// Draws one order. Origin and destination zones are drawn independently in
/// proportion to density weight and points uniformly inside the polygon; the
/// time of day follows the demand profile; the weight is light (1 to 5 lbs)
/// with probability weight_mix and otherwise heavy-tailed up to 350 lbs.
/// Each field reads its own substream of `rng`, so the same stream yields
/// the same locations and times under every scenario.
Order sample_order(const ScenarioModel& model, const CityModel& city, const RngStream& rng);

/// Order stream `index` of a study with master seed `seed`.
RngStream order_stream(std::uint64_t seed, std::size_t index);

/// Index of the distance bin holding `miles`; a distance equal to an edge
/// belongs to the bin above it.
std::size_t bin_of(const std::vector<double>& edges, double miles) noexcept;
std::vector<std::string> bin_labels(const std::vector<double>& edges);

/// Win counts of one table cell, indexed by alternative id (entry 0 unused).
struct WinCounts {
  std::vector<std::int64_t> wins;

  std::int64_t total() const noexcept;
  /// Most frequent winner, lowest id on ties; 0 for an empty cell.
  int modal() const noexcept;
  double share(int alternative_id) const noexcept;
  void add(const WinCounts& other);

  friend bool operator==(const WinCounts&, const WinCounts&) = default;
};

/// Mean of best delivery times, summed in fixed point (1e-9 h) so merging
/// partial tallies is exact and order independent.
struct TimeSum {
  std::int64_t nano_hours = 0;
  std::int64_t count = 0;

  void add(double hours) noexcept;
  void add(const TimeSum& other) noexcept;
  double mean_h() const noexcept;

  friend bool operator==(const TimeSum&, const TimeSum&) = default;
};

struct StudyReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t orders = 0;
  int replications = 0;
  double weight_mix = 0.0;
  bool pandemic = false;
  bool emerging = false;
  int alternatives = 0;
  std::vector<double> bin_edges;

  /// cells[criterion][bin][bucket]
  std::array<std::vector<PerBucket<WinCounts>>, 3> cells;
  /// Best-time winner's delivery time, per [bin][bucket].
  std::vector<PerBucket<TimeSum>> best_time;

  std::vector<ZoneId> zone_ids;
  std::vector<std::string> zone_names;
  /// First-leg mode of the best-time winner per origin zone, and last-leg
  /// mode per destination zone; [zone index][mode].
  std::vector<PerMode<std::int64_t>> first_mile;
  std::vector<PerMode<std::int64_t>> last_mile;

  std::int64_t no_feasible = 0;
  std::int64_t heavy_orders = 0;       // over the bike limit
  std::int64_t heavy_bike_wins = 0;    // bike-using winners of those, any criterion

  std::size_t bin_count() const noexcept { return bin_edges.size() + 1; }
  WinCounts cell(Criterion c, std::size_t bin, TimeBucket bucket) const;
  WinCounts by_bin(Criterion c, std::size_t bin) const;
  WinCounts by_bucket(Criterion c, TimeBucket bucket) const;
  WinCounts overall(Criterion c) const;

  TimeSum time_cell(std::size_t bin, TimeBucket bucket) const;
  TimeSum time_by_bin(std::size_t bin) const;
  TimeSum time_by_bucket(TimeBucket bucket) const;
  TimeSum time_overall() const;

  /// Combines tallies of a report with identical shape.
  void merge(const StudyReport& other);

  friend bool operator==(const StudyReport&, const StudyReport&) = default;
};

/// Empty report shaped for `config` over `city`.
StudyReport make_report(const StudyConfig& config, const CityModel& city);

/// Adds one evaluated order to a report.
void tally(StudyReport& report, const Recommendation& rec, const ModelParams& params);

/// Samples and evaluates config.orders orders on config.workers threads.
/// Orders with no feasible alternative are counted, not fatal.
StudyReport run_study(const StudyConfig& config, const CityModel& city, const ModelParams& params);

struct DeltaRow {
  std::string label;
  double before_h = 0.0;
  double after_h = 0.0;
  double delta_h = 0.0;      // before - after
  double saving_pct = 0.0;   // 100 * delta / before
};

struct Comparison {
  std::string before;
  std::string after;
  std::vector<DeltaRow> by_bucket;
  std::vector<DeltaRow> by_bin;
  DeltaRow overall;
};

/// Mean best-delivery-time deltas. Throws Error(shape_mismatch) when the
/// reports use different distance bins.
Comparison compare_studies(const StudyReport& before, const StudyReport& after);

struct ZoneModes {
  ZoneId zone = 0;
  std::string name;
  std::int64_t originating = 0;
  std::int64_t terminating = 0;
  /// Modal first/last-mile mode of best-time winners; empty for "no data".
  std::optional<Mode> first_mile;
  std::optional<Mode> last_mile;
  std::optional<Mode> combined;
};

std::vector<ZoneModes> first_last_mode_map(const StudyReport& report);

}  // namespace courier
