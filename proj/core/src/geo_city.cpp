#include "courier/geo_city.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "assets.hpp"
#include "courier/errors.hpp"

namespace courier {

namespace {

using nlohmann::json;

constexpr double kEarthRadiusMiles = 3958.7613;
// Distance tolerance (degrees) for "point lies on an edge".
constexpr double kBoundaryTolerance = 1e-9;

double cross(const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
  const double dx = b.lon - a.lon;
  const double dy = b.lat - a.lat;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return std::hypot(p.lon - a.lon, p.lat - a.lat) <= kBoundaryTolerance;
  if (std::abs(cross(a, b, p)) / len > kBoundaryTolerance) return false;
  const double t = ((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / (len * len);
  const double slack = kBoundaryTolerance / len;
  return t >= -slack && t <= 1.0 + slack;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// True when segments ab and cd cross at a single point interior to both.
bool proper_crossing(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& d) {
  const int d1 = sign(cross(a, b, c));
  const int d2 = sign(cross(a, b, d));
  const int d3 = sign(cross(c, d, a));
  const int d4 = sign(cross(c, d, b));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

// Any contact between segments, including touching and collinear overlap.
bool segments_touch(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& d) {
  if (proper_crossing(a, b, c, d)) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
         on_segment(c, d, b);
}

std::optional<std::string> simple_ring_problem(const std::vector<GeoPoint>& ring) {
  const std::size_t edges = ring.size() - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    if (ring[i] == ring[i + 1]) return "repeated consecutive vertex";
  }
  for (std::size_t i = 0; i < edges; ++i) {
    for (std::size_t j = i + 1; j < edges; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == edges - 1);
      const auto& a = ring[i];
      const auto& b = ring[i + 1];
      const auto& c = ring[j];
      const auto& d = ring[j + 1];
      if (adjacent) {
        // Neighbouring edges may only share their common vertex; folding back
        // onto each other is a degenerate self-intersection.
        const GeoPoint& shared = (j == i + 1) ? b : a;
        const GeoPoint& far_i = (j == i + 1) ? a : b;
        const GeoPoint& far_j = (j == i + 1) ? d : c;
        if (on_segment(shared, far_i, far_j) || on_segment(shared, far_j, far_i)) {
          return "edges " + std::to_string(i) + " and " + std::to_string(j) + " fold back";
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) {
        return "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect";
      }
    }
  }
  return std::nullopt;
}

// A point strictly inside a simple ring: midpoint of the first span of a
// horizontal scanline through the middle of the bounding box.
std::optional<GeoPoint> interior_point(const std::vector<GeoPoint>& ring) {
  double lo = ring.front().lat;
  double hi = lo;
  for (const auto& p : ring) {
    lo = std::min(lo, p.lat);
    hi = std::max(hi, p.lat);
  }
  const double y = lo + (hi - lo) * 0.5123;  // off-centre to dodge vertices
  std::vector<double> xs;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[i + 1];
    if ((a.lat > y) != (b.lat > y)) {
      xs.push_back(a.lon + (y - a.lat) * (b.lon - a.lon) / (b.lat - a.lat));
    }
  }
  std::sort(xs.begin(), xs.end());
  if (xs.size() < 2 || xs[0] == xs[1]) return std::nullopt;
  return GeoPoint{y, 0.5 * (xs[0] + xs[1])};
}

bool interiors_overlap(const std::vector<GeoPoint>& a, const std::vector<GeoPoint>& b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (proper_crossing(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  for (const auto& p : a) {
    if (polygon_contains(b, p)) return true;
  }
  for (const auto& p : b) {
    if (polygon_contains(a, p)) return true;
  }
  if (auto p = interior_point(a); p && polygon_contains(b, *p)) return true;
  if (auto p = interior_point(b); p && polygon_contains(a, *p)) return true;
  return false;
}

struct ParsedCity {
  std::string name;
  double circuity = 1.4;
  std::vector<Zone> zones;
  std::vector<Station> stations;
};

// Collects issues while parsing so that `validate` can list all of them.
class DatasetReader {
 public:
  std::vector<DatasetIssue> issues;

  std::optional<ParsedCity> read(std::string_view text) {
    json doc;
    try {
      doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      fail("MalformedDataset", std::string("JSON parse error: ") + e.what());
      return std::nullopt;
    }
    if (!doc.is_object()) {
      fail("MalformedDataset", "top-level value must be an object");
      return std::nullopt;
    }
    ParsedCity city;
    if (doc.contains("name")) {
      if (doc["name"].is_string()) {
        city.name = doc["name"].get<std::string>();
      } else {
        fail("MalformedDataset", "'name' must be a string");
      }
    }
    if (doc.contains("circuity")) {
      const auto& c = doc["circuity"];
      if (!c.is_number() || c.get<double>() < 1.0 || !std::isfinite(c.get<double>())) {
        fail("MalformedDataset", "'circuity' must be a number >= 1");
      } else {
        city.circuity = c.get<double>();
      }
    }
    read_zones(doc, city);
    read_stations(doc, city);
    check_geometry(city);
    check_stations(city);
    if (!issues.empty()) return std::nullopt;
    return city;
  }

 private:
  void fail(std::string kind, std::string message) {
    issues.push_back({std::move(kind), std::move(message)});
  }

  std::optional<GeoPoint> read_point(const json& lat, const json& lon, const std::string& where) {
    if (!lat.is_number() || !lon.is_number()) {
      fail("MalformedDataset", where + ": coordinates must be numbers");
      return std::nullopt;
    }
    GeoPoint p{lat.get<double>(), lon.get<double>()};
    if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0)) {
      fail("MalformedDataset", where + ": latitude/longitude out of range");
      return std::nullopt;
    }
    return p;
  }

  void read_zones(const json& doc, ParsedCity& city) {
    if (!doc.contains("zones") || !doc["zones"].is_array()) {
      fail("MalformedDataset", "'zones' must be an array");
      return;
    }
    if (doc["zones"].empty()) fail("MalformedDataset", "dataset needs at least one zone");
    std::set<ZoneId> ids;
    std::size_t index = 0;
    for (const auto& z : doc["zones"]) {
      const std::string where = "zones[" + std::to_string(index++) + "]";
      if (!z.is_object()) {
        fail("MalformedDataset", where + " must be an object");
        continue;
      }
      Zone zone;
      if (!z.contains("id") || !z["id"].is_number_integer()) {
        fail("MalformedDataset", where + ": 'id' must be an integer");
        continue;
      }
      zone.id = z["id"].get<ZoneId>();
      if (!ids.insert(zone.id).second) {
        fail("MalformedDataset", where + ": duplicate zone id " + std::to_string(zone.id));
      }
      if (z.contains("name") && z["name"].is_string()) zone.name = z["name"].get<std::string>();
      if (!z.contains("density_weight") || !z["density_weight"].is_number() ||
          !(z["density_weight"].get<double>() >= 0.0)) {
        fail("MalformedDataset", where + ": 'density_weight' must be a number >= 0");
      } else {
        zone.density_weight = z["density_weight"].get<double>();
      }
      if (!z.contains("polygon") || !z["polygon"].is_array()) {
        fail("MalformedDataset", where + ": 'polygon' must be an array of [lat, lon] pairs");
        continue;
      }
      bool ok = true;
      for (const auto& v : z["polygon"]) {
        if (!v.is_array() || v.size() != 2) {
          fail("MalformedDataset", where + ": polygon vertices must be [lat, lon] pairs");
          ok = false;
          break;
        }
        auto p = read_point(v[0], v[1], where);
        if (!p) {
          ok = false;
          break;
        }
        zone.boundary.push_back(*p);
      }
      if (ok) city.zones.push_back(std::move(zone));
    }
    std::sort(city.zones.begin(), city.zones.end(),
              [](const Zone& a, const Zone& b) { return a.id < b.id; });
  }

  void read_stations(const json& doc, ParsedCity& city) {
    if (!doc.contains("stations") || !doc["stations"].is_array()) {
      fail("MalformedDataset", "'stations' must be an array");
      return;
    }
    std::set<std::pair<Network, int>> ids;
    std::size_t index = 0;
    for (const auto& s : doc["stations"]) {
      const std::string where = "stations[" + std::to_string(index++) + "]";
      if (!s.is_object()) {
        fail("MalformedDataset", where + " must be an object");
        continue;
      }
      Station st;
      if (!s.contains("id") || !s["id"].is_number_integer()) {
        fail("MalformedDataset", where + ": 'id' must be an integer");
        continue;
      }
      st.id = s["id"].get<int>();
      const std::string network = s.value("network", std::string{});
      if (network == "subway") {
        st.network = Network::subway;
      } else if (network == "air_taxi") {
        st.network = Network::air_taxi;
      } else {
        fail("MalformedDataset", where + ": 'network' must be \"subway\" or \"air_taxi\"");
        continue;
      }
      if (s.contains("name") && s["name"].is_string()) st.name = s["name"].get<std::string>();
      if (!s.contains("lat") || !s.contains("lon")) {
        fail("MalformedDataset", where + ": missing 'lat'/'lon'");
        continue;
      }
      auto p = read_point(s["lat"], s["lon"], where);
      if (!p) continue;
      st.location = *p;
      if (!ids.insert({st.network, st.id}).second) {
        fail("MalformedDataset", where + ": duplicate " + std::string(to_string(st.network)) +
                                     " station id " + std::to_string(st.id));
      }
      city.stations.push_back(std::move(st));
    }
    const bool any_subway = std::any_of(city.stations.begin(), city.stations.end(),
                                        [](const Station& s) { return s.network == Network::subway; });
    if (!any_subway) fail("MalformedDataset", "dataset needs at least one subway station");
  }

  void check_geometry(const ParsedCity& city) {
    std::vector<bool> usable(city.zones.size(), false);
    for (std::size_t i = 0; i < city.zones.size(); ++i) {
      const auto& z = city.zones[i];
      const std::string where = "zone " + std::to_string(z.id);
      if (z.boundary.size() < 4) {
        fail("InvalidGeometry", where + ": polygon needs at least 3 distinct vertices plus closure");
        continue;
      }
      if (!(z.boundary.front() == z.boundary.back())) {
        fail("InvalidGeometry", where + ": polygon is open (last vertex must repeat the first)");
        continue;
      }
      if (auto problem = simple_ring_problem(z.boundary)) {
        fail("InvalidGeometry", where + ": polygon is not simple (" + *problem + ")");
        continue;
      }
      usable[i] = true;
    }
    for (std::size_t i = 0; i < city.zones.size(); ++i) {
      for (std::size_t j = i + 1; j < city.zones.size(); ++j) {
        if (!usable[i] || !usable[j]) continue;
        if (interiors_overlap(city.zones[i].boundary, city.zones[j].boundary)) {
          fail("InvalidGeometry", "zones " + std::to_string(city.zones[i].id) + " and " +
                                      std::to_string(city.zones[j].id) + " overlap");
        }
      }
    }
  }

  void check_stations(ParsedCity& city) {
    for (auto& st : city.stations) {
      bool inside = false;
      for (const auto& z : city.zones) {
        if (z.boundary.size() < 4) continue;
        if (polygon_contains(z.boundary, st.location) ||
            on_polygon_boundary(z.boundary, st.location)) {
          st.zone = z.id;
          inside = true;
          break;
        }
      }
      if (!inside) {
        fail("OrphanStation", std::string(to_string(st.network)) + " station " +
                                  std::to_string(st.id) +
                                  (st.name.empty() ? "" : " (" + st.name + ")") +
                                  " lies outside every zone");
      }
    }
  }
};

ErrorKind kind_from_name(const std::string& name) {
  if (name == "InvalidGeometry") return ErrorKind::invalid_geometry;
  if (name == "OrphanStation") return ErrorKind::orphan_station;
  return ErrorKind::malformed_dataset;
}

}  // namespace

std::string_view to_string(Network network) {
  return network == Network::subway ? "subway" : "air_taxi";
}

double great_circle_miles(const GeoPoint& a, const GeoPoint& b) noexcept {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dlat * 0.5);
  const double s2 = std::sin(dlon * 0.5);
  const double h = s1 * s1 + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s2 * s2;
  return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

bool on_polygon_boundary(const std::vector<GeoPoint>& ring, const GeoPoint& p) noexcept {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (on_segment(ring[i], ring[i + 1], p)) return true;
  }
  return false;
}

bool polygon_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) noexcept {
  if (on_polygon_boundary(ring, p)) return false;
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

CityModel::CityModel(std::string name, std::vector<Zone> zones, std::vector<Station> stations,
                     double circuity)
    : name_(std::move(name)),
      zones_(std::move(zones)),
      stations_(std::move(stations)),
      circuity_(circuity) {
  std::sort(zones_.begin(), zones_.end(), [](const Zone& a, const Zone& b) { return a.id < b.id; });
  std::sort(stations_.begin(), stations_.end(), [](const Station& a, const Station& b) {
    return std::pair(a.network, a.id) < std::pair(b.network, b.id);
  });
  boxes_.reserve(zones_.size());
  for (const auto& z : zones_) {
    Box box{90.0, -90.0, 180.0, -180.0};
    for (const auto& v : z.boundary) {
      box.min_lat = std::min(box.min_lat, v.lat);
      box.max_lat = std::max(box.max_lat, v.lat);
      box.min_lon = std::min(box.min_lon, v.lon);
      box.max_lon = std::max(box.max_lon, v.lon);
    }
    boxes_.push_back(box);
  }
}

const Zone& CityModel::zone(ZoneId id) const { return zones_[zone_index(id)]; }

std::size_t CityModel::zone_index(ZoneId id) const {
  auto it = std::lower_bound(zones_.begin(), zones_.end(), id,
                             [](const Zone& z, ZoneId v) { return z.id < v; });
  if (it == zones_.end() || it->id != id) {
    throw Error(ErrorKind::precondition_violation, "unknown zone id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - zones_.begin());
}

bool CityModel::has_network(Network network) const noexcept {
  return std::any_of(stations_.begin(), stations_.end(),
                     [network](const Station& s) { return s.network == network; });
}

ZoneId CityModel::zone_of(const GeoPoint& p) const {
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    const Box& b = boxes_[i];
    const double slack = kBoundaryTolerance;
    if (p.lat < b.min_lat - slack || p.lat > b.max_lat + slack || p.lon < b.min_lon - slack ||
        p.lon > b.max_lon + slack) {
      continue;
    }
    // Zones are scanned in id order, so the first hit is the lowest id even
    // when p sits on an edge shared with a later zone.
    if (on_polygon_boundary(zones_[i].boundary, p) || polygon_contains(zones_[i].boundary, p)) {
      return zones_[i].id;
    }
  }
  std::ostringstream msg;
  msg.precision(8);
  msg << "point (" << p.lat << ", " << p.lon << ") is outside every zone";
  throw Error(ErrorKind::out_of_service_area, msg.str());
}

const Station& CityModel::nearest_station(const GeoPoint& p, Network network) const {
  const Station* best = nullptr;
  double best_distance = 0.0;
  for (const auto& s : stations_) {
    if (s.network != network) continue;
    const double d = great_circle_miles(p, s.location);
    // stations_ is sorted by id within a network, so strict < keeps the
    // smallest id on ties.
    if (best == nullptr || d < best_distance) {
      best = &s;
      best_distance = d;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorKind::no_such_network,
                "city has no " + std::string(to_string(network)) + " stations");
  }
  return *best;
}

double CityModel::travel_distance(const GeoPoint& a, const GeoPoint& b) const noexcept {
  return great_circle_miles(a, b) * circuity_;
}

std::vector<DatasetIssue> check_city_document(std::string_view json_text) {
  DatasetReader reader;
  reader.read(json_text);
  return reader.issues;
}

CityModel load_city(std::string_view json_text) {
  DatasetReader reader;
  auto parsed = reader.read(json_text);
  if (!parsed) {
    const auto& first = reader.issues.front();
    throw Error(kind_from_name(first.kind), first.message);
  }
  return CityModel(std::move(parsed->name), std::move(parsed->zones), std::move(parsed->stations),
                   parsed->circuity);
}

CityModel load_city_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::malformed_dataset, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_city(buf.str());
}

std::string_view bundled_city_document() { return assets::kCityDataset; }

const CityModel& bundled_city() {
  static const CityModel city = load_city(assets::kCityDataset);
  return city;
}

}  // namespace courier
