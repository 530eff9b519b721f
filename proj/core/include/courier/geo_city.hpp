#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace courier {

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

using ZoneId = int;

struct Zone {
  ZoneId id = 0;
  std::string name;
  /// Closed ring: the last vertex repeats the first.
  std::vector<GeoPoint> boundary;
  double density_weight = 0.0;
};

enum class Network : std::uint8_t { subway, air_taxi };

std::string_view to_string(Network network);

struct Station {
  int id = 0;
  Network network = Network::subway;
  std::string name;
  GeoPoint location;
  /// Zone containing the station; filled in by load_city.
  ZoneId zone = 0;
};

/// One problem found while checking a dataset. `kind` is the name of the
/// matching ErrorKind (MalformedDataset, InvalidGeometry, OrphanStation).
struct DatasetIssue {
  std::string kind;
  std::string message;
};

/// Immutable zoned city: zones sorted by id, stations grouped by network and
/// sorted by id. Safe to share between threads.
class CityModel {
 public:
  CityModel(std::string name, std::vector<Zone> zones, std::vector<Station> stations,
            double circuity);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Zone>& zones() const noexcept { return zones_; }
  const std::vector<Station>& stations() const noexcept { return stations_; }
  double circuity() const noexcept { return circuity_; }

  const Zone& zone(ZoneId id) const;
  /// Position of a zone in zones(); throws for unknown ids.
  std::size_t zone_index(ZoneId id) const;
  bool has_network(Network network) const noexcept;

  /// Unique zone containing p; points on a shared edge resolve to the lowest id.
  /// Throws Error(out_of_service_area) when p lies in no zone.
  ZoneId zone_of(const GeoPoint& p) const;
  /// Station of `network` minimising travel_distance(p, station); ties go to
  /// the smallest station id. Throws Error(no_such_network).
  const Station& nearest_station(const GeoPoint& p, Network network) const;
  /// Street-network estimate: great-circle miles times circuity.
  double travel_distance(const GeoPoint& a, const GeoPoint& b) const noexcept;

 private:
  struct Box {
    double min_lat, max_lat, min_lon, max_lon;
  };

  std::string name_;
  std::vector<Zone> zones_;
  std::vector<Box> boxes_;
  std::vector<Station> stations_;
  double circuity_;
};

/// Great-circle distance in statute miles (haversine, mean Earth radius).
double great_circle_miles(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Even-odd containment test; points exactly on the ring count as outside.
bool polygon_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) noexcept;
bool on_polygon_boundary(const std::vector<GeoPoint>& ring, const GeoPoint& p) noexcept;

/// Runs every dataset invariant and reports all violations instead of stopping
/// at the first one.
std::vector<DatasetIssue> check_city_document(std::string_view json_text);

/// Parses and validates a city dataset. Throws Error(malformed_dataset |
/// invalid_geometry | orphan_station) describing the first violation.
CityModel load_city(std::string_view json_text);
CityModel load_city_file(const std::filesystem::path& path);
/// The 13-zone Manhattan dataset compiled into the library.
const CityModel& bundled_city();
std::string_view bundled_city_document();

}  // namespace courier
