#include "courier/catalog.hpp"

#include <algorithm>
#include <charconv>

#include "assets.hpp"
#include "courier/errors.hpp"

namespace courier {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string join(const Alternative& a, std::string_view arrow, bool display) {
  auto name = [&](Mode m) { return display ? display_name(m) : to_string(m); };
  std::string s(name(a.first));
  s.append(arrow).append(name(a.middle)).append(arrow).append(name(a.last));
  return s;
}

}  // namespace

std::string_view to_string(Tier tier) {
  return tier == Tier::existing ? "existing" : "emerging";
}

Mode Alternative::mode(LegRole role) const noexcept {
  switch (role) {
    case LegRole::first: return first;
    case LegRole::middle: return middle;
    case LegRole::last: return last;
  }
  return middle;
}

std::string Alternative::label() const { return join(*this, "->", false); }
std::string Alternative::display_label() const { return join(*this, " → ", true); }

std::vector<Alternative> parse_catalog_csv(std::string_view text) {
  std::vector<Alternative> rows;
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& why) -> Error {
      return Error(ErrorKind::malformed_dataset,
                   "catalog line " + std::to_string(line_no) + ": " + why);
    };
    const auto cells = split(line, ',');
    if (!header_seen) {
      if (cells.size() != 5 || cells[0] != "id" || cells[1] != "first" || cells[2] != "middle" ||
          cells[3] != "last" || cells[4] != "tier") {
        throw fail("expected header id,first,middle,last,tier");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 5) throw fail("expected 5 fields");
    Alternative a;
    const auto [ptr, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), a.id);
    if (ec != std::errc{} || ptr != cells[0].data() + cells[0].size()) throw fail("bad id");
    Mode* slots[] = {&a.first, &a.middle, &a.last};
    for (int i = 0; i < 3; ++i) {
      const auto m = parse_mode(cells[1 + i]);
      if (!m) throw fail("unknown mode '" + std::string(cells[1 + i]) + "'");
      *slots[i] = *m;
    }
    if (cells[4] == "existing") {
      a.tier = Tier::existing;
    } else if (cells[4] == "emerging") {
      a.tier = Tier::emerging;
    } else {
      throw fail("unknown tier '" + std::string(cells[4]) + "'");
    }
    if (a.id != static_cast<int>(rows.size()) + 1) throw fail("ids must run 1, 2, 3, ...");
    rows.push_back(a);
  }
  if (!header_seen) throw Error(ErrorKind::malformed_dataset, "catalog is empty");
  return rows;
}

std::string_view bundled_catalog_csv() { return assets::kCatalogCsv; }

const std::vector<Alternative>& all_alternatives() {
  static const std::vector<Alternative> rows = parse_catalog_csv(assets::kCatalogCsv);
  return rows;
}

std::vector<Alternative> catalog(const Scenario& scenario) {
  std::vector<Alternative> out;
  for (const auto& a : all_alternatives()) {
    if (a.tier == Tier::existing || scenario.emerging) out.push_back(a);
  }
  return out;
}

const Alternative& alternative(int id) {
  const auto& rows = all_alternatives();
  if (id < 1 || id > static_cast<int>(rows.size())) {
    throw Error(ErrorKind::precondition_violation, "no alternative with id " + std::to_string(id));
  }
  return rows[static_cast<std::size_t>(id - 1)];
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::over_weight_bike: return "over_weight_bike";
    case Violation::over_weight_walk: return "over_weight_walk";
    case Violation::over_weight_robot: return "over_weight_robot";
    case Violation::robot_range: return "robot_range";
    case Violation::service_unavailable: return "service_unavailable";
    case Violation::no_station: return "no_station";
    case Violation::over_volume: return "over_volume";
  }
  return "?";
}

bool FeasibilityVerdict::has(Violation v) const noexcept {
  return std::find(reasons.begin(), reasons.end(), v) != reasons.end();
}

FeasibilityVerdict feasible(const Alternative& alt, const Order& order, const LegPlan& plan,
                            const ScenarioModel& model) {
  const auto& lim = model.params().limits;
  const TimeBucket bucket = model.params().buckets.bucket_of(order.time_of_day_min);
  FeasibilityVerdict v;
  auto add = [&](Violation r) {
    if (!v.has(r)) v.reasons.push_back(r);
  };

  if (alt.uses(Mode::bike) && order.weight_lbs > lim.bike_max_lbs) add(Violation::over_weight_bike);
  if (alt.uses(Mode::walk) && order.weight_lbs > lim.walk_max_lbs) add(Violation::over_weight_walk);
  if (alt.uses(Mode::robot)) {
    if (order.weight_lbs > lim.robot_max_lbs) add(Violation::over_weight_robot);
    for (const auto& leg : plan.legs) {
      if (leg.mode == Mode::robot && leg.distance_mi > lim.robot_range_mi) add(Violation::robot_range);
    }
  }
  for (LegRole role : kAllLegs) {
    const Mode m = alt.mode(role);
    if (is_transit(m) && !model.service_available(m, bucket)) add(Violation::service_unavailable);
  }
  const bool station_middle = alt.middle == Mode::subway || alt.middle == Mode::air_taxi;
  if (station_middle && !alt.single_mode() && !plan.stations_resolved) add(Violation::no_station);
  for (const auto& [mode, cap] : lim.volume_caps_cuft) {
    if (alt.uses(mode) && order.volume_cuft > cap) add(Violation::over_volume);
  }
  return v;
}

}  // namespace courier
