#include "courier/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "courier/catalog.hpp"
#include "courier/errors.hpp"

namespace courier {

namespace {

constexpr std::uint64_t kStudyTag = 0x5354554459ULL;
constexpr std::uint64_t kSampleTag = 1;
constexpr std::uint64_t kEvalTag = 2;

enum SampleField : std::uint64_t {
  kOriginZone = 1,
  kDestinationZone,
  kOriginPoint,
  kDestinationPoint,
  kTimeOfDay,
  kWeight,
  kVolume,
};

constexpr std::size_t kChunk = 32;

std::size_t pick_zone(const CityModel& city, RngStream rng) {
  double total = 0.0;
  for (const auto& z : city.zones()) total += z.density_weight;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  const auto& zones = city.zones();
  for (std::size_t i = 0; i < zones.size(); ++i) {
    acc += zones[i].density_weight;
    if (u < acc) return i;
  }
  // Rounding can leave u at the very top; fall back to the last weighted zone.
  for (std::size_t i = zones.size(); i-- > 0;) {
    if (zones[i].density_weight > 0.0) return i;
  }
  return 0;
}

GeoPoint point_in(const Zone& zone, RngStream& rng) {
  double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
  for (const auto& p : zone.boundary) {
    min_lat = std::min(min_lat, p.lat);
    max_lat = std::max(max_lat, p.lat);
    min_lon = std::min(min_lon, p.lon);
    max_lon = std::max(max_lon, p.lon);
  }
  while (true) {
    const GeoPoint p{rng.uniform(min_lat, max_lat), rng.uniform(min_lon, max_lon)};
    if (polygon_contains(zone.boundary, p)) return p;
  }
}

int sample_minute(const DemandModel& d, RngStream rng) {
  double total = d.background_weight;
  for (const auto& pk : d.peaks) total += pk.weight;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  double hour = -1.0;
  for (const auto& pk : d.peaks) {
    acc += pk.weight;
    if (u < acc) {
      hour = rng.normal(pk.hour, pk.sd_hours);
      break;
    }
  }
  if (hour < -0.5) hour = rng.uniform(0.0, 24.0);
  hour = std::fmod(hour, 24.0);
  if (hour < 0.0) hour += 24.0;
  return std::clamp(static_cast<int>(std::floor(hour * 60.0)), 0, 1439);
}

double sample_weight(const DemandModel& d, double weight_mix, RngStream rng) {
  if (rng.uniform() < weight_mix) {
    // (light_min, light_max]
    return d.light_max_lbs - rng.uniform() * (d.light_max_lbs - d.light_min_lbs);
  }
  const double a = d.light_max_lbs;
  const double b = d.heavy_max_lbs;
  const double v = 1.0 - rng.uniform();  // (0, 1]
  double w;
  if (d.tail_exponent == 0.0) {
    w = a * std::pow(b / a, v);
  } else {
    const double k = d.tail_exponent;
    const double lo = std::pow(a, -k);
    const double hi = std::pow(b, -k);
    w = std::pow(lo - v * (lo - hi), -1.0 / k);
  }
  return std::clamp(w, std::nextafter(a, b), b);
}

std::string edge_text(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

template <typename Counts>
std::optional<Mode> modal_mode(const Counts& counts) {
  std::optional<Mode> best;
  std::int64_t best_n = 0;
  for (Mode m : kAllModes) {
    if (counts[index_of(m)] > best_n) {
      best_n = counts[index_of(m)];
      best = m;
    }
  }
  return best;
}

}  // namespace

void StudyConfig::validate() const {
  if (orders < 1) throw Error(ErrorKind::config_error, "'orders' must be >= 1");
  if (replications < 1) throw Error(ErrorKind::config_error, "'replications' must be >= 1");
  for (std::size_t i = 0; i < bin_edges.size(); ++i) {
    if (!std::isfinite(bin_edges[i]) || bin_edges[i] <= 0.0 ||
        (i > 0 && bin_edges[i] <= bin_edges[i - 1])) {
      throw Error(ErrorKind::config_error, "'bin_edges' must be positive and strictly increasing");
    }
  }
  scenario.validate();
}

RngStream order_stream(std::uint64_t seed, std::size_t index) {
  return RngStream(seed).derive(kStudyTag).derive(static_cast<std::uint64_t>(index));
}

Order sample_order(const ScenarioModel& model, const CityModel& city, const RngStream& rng) {
  const DemandModel& d = model.params().demand;
  const auto& zones = city.zones();
  Order o;
  const Zone& oz = zones[pick_zone(city, rng.derive(kOriginZone))];
  const Zone& dz = zones[pick_zone(city, rng.derive(kDestinationZone))];
  RngStream op = rng.derive(kOriginPoint);
  RngStream dp = rng.derive(kDestinationPoint);
  o.origin = point_in(oz, op);
  do {
    o.destination = point_in(dz, dp);
  } while (o.destination == o.origin);
  o.time_of_day_min = sample_minute(d, rng.derive(kTimeOfDay));
  o.weight_lbs = sample_weight(d, model.scenario().weight_mix, rng.derive(kWeight));
  RngStream vs = rng.derive(kVolume);
  o.volume_cuft = d.volume_min_cuft * std::pow(d.volume_max_cuft / d.volume_min_cuft, vs.uniform());
  return o;
}

std::size_t bin_of(const std::vector<double>& edges, double miles) noexcept {
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), miles) -
                                  edges.begin());
}

std::vector<std::string> bin_labels(const std::vector<double>& edges) {
  std::vector<std::string> out;
  if (edges.empty()) return {"all"};
  out.push_back("<" + edge_text(edges.front()));
  for (std::size_t i = 1; i < edges.size(); ++i) {
    out.push_back(edge_text(edges[i - 1]) + "-" + edge_text(edges[i]));
  }
  out.push_back(">" + edge_text(edges.back()));
  return out;
}

std::int64_t WinCounts::total() const noexcept {
  std::int64_t n = 0;
  for (auto w : wins) n += w;
  return n;
}

int WinCounts::modal() const noexcept {
  int best = 0;
  std::int64_t best_n = 0;
  for (std::size_t id = 1; id < wins.size(); ++id) {
    if (wins[id] > best_n) {
      best_n = wins[id];
      best = static_cast<int>(id);
    }
  }
  return best;
}

double WinCounts::share(int alternative_id) const noexcept {
  const auto n = total();
  if (n == 0 || alternative_id < 1 || alternative_id >= static_cast<int>(wins.size())) return 0.0;
  return static_cast<double>(wins[static_cast<std::size_t>(alternative_id)]) /
         static_cast<double>(n);
}

void WinCounts::add(const WinCounts& other) {
  if (wins.size() < other.wins.size()) wins.resize(other.wins.size(), 0);
  for (std::size_t i = 0; i < other.wins.size(); ++i) wins[i] += other.wins[i];
}

void TimeSum::add(double hours) noexcept {
  nano_hours += std::llround(hours * 1e9);
  ++count;
}

void TimeSum::add(const TimeSum& other) noexcept {
  nano_hours += other.nano_hours;
  count += other.count;
}

double TimeSum::mean_h() const noexcept {
  return count == 0 ? 0.0 : static_cast<double>(nano_hours) * 1e-9 / static_cast<double>(count);
}

WinCounts StudyReport::cell(Criterion c, std::size_t bin, TimeBucket bucket) const {
  return cells[index_of(c)].at(bin)[index_of(bucket)];
}

WinCounts StudyReport::by_bin(Criterion c, std::size_t bin) const {
  WinCounts out;
  for (TimeBucket b : kAllBuckets) out.add(cell(c, bin, b));
  return out;
}

WinCounts StudyReport::by_bucket(Criterion c, TimeBucket bucket) const {
  WinCounts out;
  for (std::size_t bin = 0; bin < bin_count(); ++bin) out.add(cell(c, bin, bucket));
  return out;
}

WinCounts StudyReport::overall(Criterion c) const {
  WinCounts out;
  for (std::size_t bin = 0; bin < bin_count(); ++bin) out.add(by_bin(c, bin));
  return out;
}

TimeSum StudyReport::time_cell(std::size_t bin, TimeBucket bucket) const {
  return best_time.at(bin)[index_of(bucket)];
}

TimeSum StudyReport::time_by_bin(std::size_t bin) const {
  TimeSum out;
  for (TimeBucket b : kAllBuckets) out.add(time_cell(bin, b));
  return out;
}

TimeSum StudyReport::time_by_bucket(TimeBucket bucket) const {
  TimeSum out;
  for (std::size_t bin = 0; bin < bin_count(); ++bin) out.add(time_cell(bin, bucket));
  return out;
}

TimeSum StudyReport::time_overall() const {
  TimeSum out;
  for (std::size_t bin = 0; bin < bin_count(); ++bin) out.add(time_by_bin(bin));
  return out;
}

void StudyReport::merge(const StudyReport& other) {
  if (other.bin_edges != bin_edges || other.zone_ids != zone_ids) {
    throw Error(ErrorKind::shape_mismatch, "cannot merge reports of different shape");
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t bin = 0; bin < bin_count(); ++bin) {
      for (std::size_t b = 0; b < kBucketCount; ++b) cells[c][bin][b].add(other.cells[c][bin][b]);
    }
  }
  for (std::size_t bin = 0; bin < bin_count(); ++bin) {
    for (std::size_t b = 0; b < kBucketCount; ++b) best_time[bin][b].add(other.best_time[bin][b]);
  }
  for (std::size_t z = 0; z < zone_ids.size(); ++z) {
    for (std::size_t m = 0; m < kModeCount; ++m) {
      first_mile[z][m] += other.first_mile[z][m];
      last_mile[z][m] += other.last_mile[z][m];
    }
  }
  no_feasible += other.no_feasible;
  heavy_orders += other.heavy_orders;
  heavy_bike_wins += other.heavy_bike_wins;
}

StudyReport make_report(const StudyConfig& config, const CityModel& city) {
  StudyReport r;
  r.scenario = config.scenario.name;
  r.seed = config.seed;
  r.orders = config.orders;
  r.replications = config.replications;
  r.weight_mix = config.scenario.weight_mix;
  r.pandemic = config.scenario.pandemic;
  r.emerging = config.scenario.emerging;
  r.alternatives = static_cast<int>(catalog(config.scenario).size());
  r.bin_edges = config.bin_edges;
  WinCounts empty;
  empty.wins.assign(static_cast<std::size_t>(r.alternatives) + 1, 0);
  PerBucket<WinCounts> row;
  row.fill(empty);
  for (auto& c : r.cells) c.assign(r.bin_count(), row);
  r.best_time.assign(r.bin_count(), PerBucket<TimeSum>{});
  for (const auto& z : city.zones()) {
    r.zone_ids.push_back(z.id);
    r.zone_names.push_back(z.name);
  }
  r.first_mile.assign(r.zone_ids.size(), PerMode<std::int64_t>{});
  r.last_mile.assign(r.zone_ids.size(), PerMode<std::int64_t>{});
  return r;
}

void tally(StudyReport& report, const Recommendation& rec, const ModelParams& params) {
  const std::size_t bin = bin_of(report.bin_edges, rec.direct_distance_mi);
  const std::size_t b = index_of(rec.bucket);
  for (Criterion c : kAllCriteria) {
    const int best = rec.best(c);
    auto& wins = report.cells[index_of(c)][bin][b].wins;
    if (best >= static_cast<int>(wins.size())) wins.resize(static_cast<std::size_t>(best) + 1, 0);
    ++wins[static_cast<std::size_t>(best)];
  }
  const Evaluation& fastest = rec.evaluation(rec.best_time);
  report.best_time[bin][b].add(fastest.delivery_time_h());

  auto zone_slot = [&](ZoneId id) {
    const auto it = std::lower_bound(report.zone_ids.begin(), report.zone_ids.end(), id);
    return static_cast<std::size_t>(it - report.zone_ids.begin());
  };
  const Alternative& alt = alternative(rec.best_time);
  ++report.first_mile.at(zone_slot(rec.origin_zone))[index_of(alt.first)];
  ++report.last_mile.at(zone_slot(rec.destination_zone))[index_of(alt.last)];

  if (rec.order.weight_lbs > params.limits.bike_max_lbs) {
    ++report.heavy_orders;
    for (Criterion c : kAllCriteria) {
      if (alternative(rec.best(c)).uses(Mode::bike)) ++report.heavy_bike_wins;
    }
  }
}

StudyReport run_study(const StudyConfig& config, const CityModel& city, const ModelParams& params) {
  config.validate();
  const ScenarioModel model(params, config.scenario);
  const std::vector<Alternative> alts = catalog(config.scenario);

  unsigned workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunks = (config.orders + kChunk - 1) / kChunk;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

  std::vector<StudyReport> partial(workers, make_report(config, city));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](StudyReport& out) {
    try {
      while (true) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= config.orders) break;
        const std::size_t end = std::min(config.orders, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
          const RngStream stream = order_stream(config.seed, i);
          const Order order = sample_order(model, city, stream.derive(kSampleTag));
          const OrderGeometry geo = resolve_geometry(order, city);
          try {
            const Recommendation rec = evaluate_order(geo, alts, model, city,
                                                      stream.derive(kEvalTag), config.replications);
            tally(out, rec, model.params());
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_feasible_alternative) throw;
            ++out.no_feasible;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(config.orders);
    }
  };

  if (workers <= 1) {
    work(partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, std::ref(partial[w]));
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  StudyReport report = std::move(partial[0]);
  for (std::size_t w = 1; w < partial.size(); ++w) report.merge(partial[w]);
  return report;
}

Comparison compare_studies(const StudyReport& before, const StudyReport& after) {
  if (before.bin_edges != after.bin_edges) {
    throw Error(ErrorKind::shape_mismatch,
                "reports use different distance bins and cannot be compared");
  }
  auto row = [](std::string label, const TimeSum& a, const TimeSum& b) {
    DeltaRow r;
    r.label = std::move(label);
    r.before_h = a.mean_h();
    r.after_h = b.mean_h();
    r.delta_h = r.before_h - r.after_h;
    r.saving_pct = r.before_h > 0.0 ? 100.0 * r.delta_h / r.before_h : 0.0;
    return r;
  };
  Comparison c;
  c.before = before.scenario;
  c.after = after.scenario;
  for (TimeBucket b : kAllBuckets) {
    c.by_bucket.push_back(
        row(std::string(to_string(b)), before.time_by_bucket(b), after.time_by_bucket(b)));
  }
  const auto labels = bin_labels(before.bin_edges);
  for (std::size_t bin = 0; bin < before.bin_count(); ++bin) {
    c.by_bin.push_back(row(labels[bin], before.time_by_bin(bin), after.time_by_bin(bin)));
  }
  c.overall = row("all", before.time_overall(), after.time_overall());
  return c;
}

std::vector<ZoneModes> first_last_mode_map(const StudyReport& report) {
  std::vector<ZoneModes> out;
  for (std::size_t z = 0; z < report.zone_ids.size(); ++z) {
    ZoneModes m;
    m.zone = report.zone_ids[z];
    m.name = report.zone_names[z];
    PerMode<std::int64_t> both{};
    for (std::size_t k = 0; k < kModeCount; ++k) {
      m.originating += report.first_mile[z][k];
      m.terminating += report.last_mile[z][k];
      both[k] = report.first_mile[z][k] + report.last_mile[z][k];
    }
    m.first_mile = modal_mode(report.first_mile[z]);
    m.last_mile = modal_mode(report.last_mile[z]);
    m.combined = modal_mode(both);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace courier
