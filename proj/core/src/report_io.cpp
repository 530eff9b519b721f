#include "courier/report_io.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "courier/catalog.hpp"
#include "courier/errors.hpp"

namespace courier {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cell_text(const WinCounts& w) {
  const int id = w.modal();
  if (id == 0) return "no data";
  return alternative(id).label() + " (" + fixed(w.share(id), 3) + ")";
}

json wins_json(const WinCounts& w) {
  json shares = json::object();
  for (std::size_t id = 1; id < w.wins.size(); ++id) {
    if (w.wins[id] > 0) shares[std::to_string(id)] = w.share(static_cast<int>(id));
  }
  const int modal = w.modal();
  return json{{"wins", w.wins},
              {"orders", w.total()},
              {"modal", modal},
              {"modal_label", modal == 0 ? std::string("no data") : alternative(modal).label()},
              {"modal_share", w.share(modal)},
              {"shares", shares}};
}

json time_json(const TimeSum& t) {
  return json{{"nano_hours", t.nano_hours}, {"count", t.count}, {"mean_min", t.mean_h() * 60.0}};
}

std::string mode_or_none(const std::optional<Mode>& m) {
  return m ? std::string(to_string(*m)) : std::string("no data");
}

json delta_json(const DeltaRow& r) {
  return json{{"label", r.label},
              {"before_min", r.before_h * 60.0},
              {"after_min", r.after_h * 60.0},
              {"delta_min", r.delta_h * 60.0},
              {"saving_pct", r.saving_pct}};
}

}  // namespace

std::string report_basename(const StudyReport& report) {
  return "report_" + report.scenario + "_" + std::to_string(report.seed);
}

std::string report_csv(const StudyReport& r) {
  std::ostringstream os;
  os << "table,row";
  for (TimeBucket b : kAllBuckets) os << ',' << to_string(b);
  os << ",all\n";
  const auto labels = bin_labels(r.bin_edges);
  for (Criterion c : kAllCriteria) {
    const std::string table = "best_" + std::string(to_string(c));
    for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
      os << table << ',' << labels[bin];
      for (TimeBucket b : kAllBuckets) os << ',' << cell_text(r.cell(c, bin, b));
      os << ',' << cell_text(r.by_bin(c, bin)) << '\n';
    }
    os << table << ",all";
    for (TimeBucket b : kAllBuckets) os << ',' << cell_text(r.by_bucket(c, b));
    os << ',' << cell_text(r.overall(c)) << '\n';
  }
  for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
    os << "mean_best_time_min," << labels[bin];
    for (TimeBucket b : kAllBuckets) os << ',' << fixed(r.time_cell(bin, b).mean_h() * 60.0, 2);
    os << ',' << fixed(r.time_by_bin(bin).mean_h() * 60.0, 2) << '\n';
  }
  os << "mean_best_time_min,all";
  for (TimeBucket b : kAllBuckets) os << ',' << fixed(r.time_by_bucket(b).mean_h() * 60.0, 2);
  os << ',' << fixed(r.time_overall().mean_h() * 60.0, 2) << '\n';
  return os.str();
}

std::string report_json(const StudyReport& r) {
  json j;
  j["format"] = "courier-report";
  j["version"] = 1;
  j["metadata"] = {{"scenario", r.scenario},   {"seed", r.seed},
                   {"orders", r.orders},       {"replications", r.replications},
                   {"weight_mix", r.weight_mix}, {"pandemic", r.pandemic},
                   {"emerging", r.emerging},   {"alternatives", r.alternatives},
                   {"no_feasible", r.no_feasible}, {"heavy_orders", r.heavy_orders},
                   {"heavy_bike_wins", r.heavy_bike_wins}};
  j["bin_edges"] = r.bin_edges;
  j["bin_labels"] = bin_labels(r.bin_edges);
  std::vector<std::string> buckets;
  for (TimeBucket b : kAllBuckets) buckets.emplace_back(to_string(b));
  j["buckets"] = buckets;

  json criteria = json::object();
  for (Criterion c : kAllCriteria) {
    json cells = json::array();
    json by_bin = json::array();
    for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
      json row = json::array();
      for (TimeBucket b : kAllBuckets) row.push_back(wins_json(r.cell(c, bin, b)));
      cells.push_back(row);
      by_bin.push_back(wins_json(r.by_bin(c, bin)));
    }
    json by_bucket = json::array();
    for (TimeBucket b : kAllBuckets) by_bucket.push_back(wins_json(r.by_bucket(c, b)));
    criteria[std::string(to_string(c))] = {{"cells", cells},
                                           {"by_bin", by_bin},
                                           {"by_bucket", by_bucket},
                                           {"overall", wins_json(r.overall(c))}};
  }
  j["criteria"] = criteria;

  json times = json::array();
  json by_bin = json::array();
  for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
    json row = json::array();
    for (TimeBucket b : kAllBuckets) row.push_back(time_json(r.time_cell(bin, b)));
    times.push_back(row);
    by_bin.push_back(time_json(r.time_by_bin(bin)));
  }
  json by_bucket = json::array();
  for (TimeBucket b : kAllBuckets) by_bucket.push_back(time_json(r.time_by_bucket(b)));
  j["best_time"] = {{"cells", times},
                    {"by_bin", by_bin},
                    {"by_bucket", by_bucket},
                    {"overall", time_json(r.time_overall())}};

  json zones = json::array();
  const auto map = first_last_mode_map(r);
  for (std::size_t z = 0; z < r.zone_ids.size(); ++z) {
    zones.push_back({{"zone", r.zone_ids[z]},
                     {"name", r.zone_names[z]},
                     {"first_mile_counts", r.first_mile[z]},
                     {"last_mile_counts", r.last_mile[z]},
                     {"originating", map[z].originating},
                     {"terminating", map[z].terminating},
                     {"first_mile", mode_or_none(map[z].first_mile)},
                     {"last_mile", mode_or_none(map[z].last_mile)},
                     {"combined", mode_or_none(map[z].combined)}});
  }
  j["zones"] = zones;
  std::vector<std::string> modes;
  for (Mode m : kAllModes) modes.emplace_back(to_string(m));
  j["modes"] = modes;
  return j.dump(2) + "\n";
}

StudyReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", std::string()) != "courier-report") {
      throw Error(ErrorKind::config_error, "not a courier report (missing format tag)");
    }
    StudyReport r;
    const auto& m = j.at("metadata");
    r.scenario = m.at("scenario").get<std::string>();
    r.seed = m.at("seed").get<std::uint64_t>();
    r.orders = m.at("orders").get<std::size_t>();
    r.replications = m.at("replications").get<int>();
    r.weight_mix = m.at("weight_mix").get<double>();
    r.pandemic = m.at("pandemic").get<bool>();
    r.emerging = m.at("emerging").get<bool>();
    r.alternatives = m.at("alternatives").get<int>();
    r.no_feasible = m.at("no_feasible").get<std::int64_t>();
    r.heavy_orders = m.at("heavy_orders").get<std::int64_t>();
    r.heavy_bike_wins = m.at("heavy_bike_wins").get<std::int64_t>();
    r.bin_edges = j.at("bin_edges").get<std::vector<double>>();
    for (Criterion c : kAllCriteria) {
      const auto& cells = j.at("criteria").at(std::string(to_string(c))).at("cells");
      if (cells.size() != r.bin_count()) {
        throw Error(ErrorKind::config_error, "report cell table does not match its bin edges");
      }
      auto& dst = r.cells[index_of(c)];
      dst.resize(r.bin_count());
      for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
        for (std::size_t b = 0; b < kBucketCount; ++b) {
          dst[bin][b].wins = cells.at(bin).at(b).at("wins").get<std::vector<std::int64_t>>();
        }
      }
    }
    const auto& times = j.at("best_time").at("cells");
    r.best_time.resize(r.bin_count());
    for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
      for (std::size_t b = 0; b < kBucketCount; ++b) {
        r.best_time[bin][b].nano_hours = times.at(bin).at(b).at("nano_hours").get<std::int64_t>();
        r.best_time[bin][b].count = times.at(bin).at(b).at("count").get<std::int64_t>();
      }
    }
    for (const auto& z : j.at("zones")) {
      r.zone_ids.push_back(z.at("zone").get<ZoneId>());
      r.zone_names.push_back(z.at("name").get<std::string>());
      r.first_mile.push_back(z.at("first_mile_counts").get<PerMode<std::int64_t>>());
      r.last_mile.push_back(z.at("last_mile_counts").get<PerMode<std::int64_t>>());
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config_error, std::string("unreadable report: ") + e.what());
  }
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream os;
  os << "block,row,before_min,after_min,delta_min,saving_pct\n";
  auto line = [&](const char* block, const DeltaRow& r) {
    os << block << ',' << r.label << ',' << fixed(r.before_h * 60.0, 2) << ','
       << fixed(r.after_h * 60.0, 2) << ',' << fixed(r.delta_h * 60.0, 2) << ','
       << fixed(r.saving_pct, 1) << '\n';
  };
  for (const auto& r : c.by_bucket) line("by_bucket", r);
  for (const auto& r : c.by_bin) line("by_bin", r);
  line("overall", c.overall);
  return os.str();
}

std::string comparison_json(const Comparison& c) {
  json j;
  j["before"] = c.before;
  j["after"] = c.after;
  j["by_bucket"] = json::array();
  for (const auto& r : c.by_bucket) j["by_bucket"].push_back(delta_json(r));
  j["by_bin"] = json::array();
  for (const auto& r : c.by_bin) j["by_bin"].push_back(delta_json(r));
  j["overall"] = delta_json(c.overall);
  return j.dump(2) + "\n";
}

std::string recommendation_json(const Recommendation& rec, const CityModel& city) {
  json j;
  auto winner = [&](int id) {
    const auto& e = rec.evaluation(id);
    return json{{"id", id},
                {"alternative", alternative(id).label()},
                {"delivery_time_min", e.delivery_time_h() * 60.0},
                {"cost_usd", e.cost_usd},
                {"co2_lb", e.co2_lb}};
  };
  j["order"] = {{"origin", {rec.order.origin.lat, rec.order.origin.lon}},
                {"destination", {rec.order.destination.lat, rec.order.destination.lon}},
                {"time_of_day_min", rec.order.time_of_day_min},
                {"weight_lbs", rec.order.weight_lbs},
                {"volume_cuft", rec.order.volume_cuft}};
  j["bucket"] = std::string(to_string(rec.bucket));
  j["origin_zone"] = {{"id", rec.origin_zone}, {"name", city.zone(rec.origin_zone).name}};
  j["destination_zone"] = {{"id", rec.destination_zone},
                           {"name", city.zone(rec.destination_zone).name}};
  j["direct_distance_mi"] = rec.direct_distance_mi;
  j["replications"] = rec.replications;
  j["best_time"] = winner(rec.best_time);
  j["best_cost"] = winner(rec.best_cost);
  j["best_co2"] = winner(rec.best_co2);
  json rows = json::array();
  for (const auto& e : rec.evaluations) {
    json row{{"id", e.alternative_id},
             {"alternative", alternative(e.alternative_id).label()},
             {"feasible", e.feasible}};
    if (e.feasible) {
      row["travel_time_min"] = e.travel_time_h * 60.0;
      row["wait_time_min"] = e.wait_time_h * 60.0;
      row["delivery_time_min"] = e.delivery_time_h() * 60.0;
      row["cost_usd"] = e.cost_usd;
      row["cost_breakdown"] = {{"labor", e.cost.labor},
                               {"operating", e.cost.operating},
                               {"fares", e.cost.fares},
                               {"parking", e.cost.parking}};
      row["co2_lb"] = e.co2_lb;
      row["distance_mi"] = e.distance_mi;
      json legs = json::array();
      for (const auto& leg : e.plan.legs) {
        legs.push_back({{"mode", std::string(to_string(leg.mode))}, {"distance_mi", leg.distance_mi}});
      }
      row["legs"] = legs;
    } else {
      std::vector<std::string> why;
      for (Violation v : e.violations) why.emplace_back(to_string(v));
      row["violations"] = why;
    }
    rows.push_back(row);
  }
  j["evaluations"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace courier
