#include "format.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "courier/catalog.hpp"

namespace courier::cli {

namespace {

std::size_t width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string num(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string clock(int minute) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

std::string cell(const WinCounts& w) {
  const int id = w.modal();
  if (id == 0) return "-";
  return alternative(id).display_label() + " (" + num(w.share(id), 2) + ")";
}

}  // namespace

TextTable::TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

void TextTable::add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string TextTable::render() const {
  std::vector<std::size_t> widths;
  for (const auto& row : rows_) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t i = 0; i < rows_[r].size(); ++i) {
      os << rows_[r][i];
      if (i + 1 < rows_[r].size()) os << std::string(widths[i] - width(rows_[r][i]) + 2, ' ');
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w + 2;
      os << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
    }
  }
  return os.str();
}

std::string format_recommendation(const Recommendation& rec, const CityModel& city) {
  std::ostringstream os;
  os << "Order: " << city.zone(rec.origin_zone).name << " -> "
     << city.zone(rec.destination_zone).name << ", " << num(rec.direct_distance_mi, 2)
     << " mi, " << clock(rec.order.time_of_day_min) << " (" << display_name(rec.bucket) << "), "
     << num(rec.order.weight_lbs, 1) << " lbs, " << rec.replications << " replications\n\n";
  auto line = [&](const char* what, int id, const std::string& value) {
    os << "  " << what << alternative(id).display_label() << "  [#" << id << ", " << value << "]\n";
  };
  const auto& t = rec.evaluation(rec.best_time);
  const auto& c = rec.evaluation(rec.best_cost);
  const auto& e = rec.evaluation(rec.best_co2);
  os << "Best alternatives\n";
  line("time: ", rec.best_time, num(t.delivery_time_h() * 60.0, 1) + " min");
  line("cost: ", rec.best_cost, "$" + num(c.cost_usd, 2));
  line("CO2:  ", rec.best_co2, num(e.co2_lb, 2) + " lb");
  os << '\n';

  TextTable table({"#", "alternative", "time min", "wait min", "cost $", "CO2 lb", "dist mi", "status"});
  for (const auto& ev : rec.evaluations) {
    const std::string label = alternative(ev.alternative_id).display_label();
    if (!ev.feasible) {
      std::string why;
      for (Violation v : ev.violations) why += (why.empty() ? "" : ",") + std::string(to_string(v));
      table.add({std::to_string(ev.alternative_id), label, "-", "-", "-", "-", "-", why});
      continue;
    }
    std::string mark;
    if (ev.alternative_id == rec.best_time) mark += "T";
    if (ev.alternative_id == rec.best_cost) mark += "C";
    if (ev.alternative_id == rec.best_co2) mark += "E";
    table.add({std::to_string(ev.alternative_id), label, num(ev.delivery_time_h() * 60.0, 1),
               num(ev.wait_time_h * 60.0, 1), num(ev.cost_usd, 2), num(ev.co2_lb, 2),
               num(ev.distance_mi, 2), mark.empty() ? "ok" : "best " + mark});
  }
  os << table.render();
  return os.str();
}

std::string format_report(const StudyReport& r) {
  std::ostringstream os;
  os << "Scenario " << r.scenario << ", seed " << r.seed << ", " << r.orders << " orders x "
     << r.replications << " replications, " << r.alternatives << " alternatives, weight mix "
     << num(r.weight_mix, 2) << "\n";
  const auto labels = bin_labels(r.bin_edges);
  std::vector<std::string> header{"miles"};
  for (TimeBucket b : kAllBuckets) header.emplace_back(display_name(b));
  header.emplace_back("All");
  const char* titles[] = {"Best time alternative", "Best cost alternative", "Best CO2 alternative"};
  for (Criterion c : kAllCriteria) {
    os << '\n' << titles[index_of(c)] << " (modal winner, win share)\n";
    TextTable t(header);
    for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
      std::vector<std::string> row{labels[bin]};
      for (TimeBucket b : kAllBuckets) row.push_back(cell(r.cell(c, bin, b)));
      row.push_back(cell(r.by_bin(c, bin)));
      t.add(std::move(row));
    }
    std::vector<std::string> all{"all"};
    for (TimeBucket b : kAllBuckets) all.push_back(cell(r.by_bucket(c, b)));
    all.push_back(cell(r.overall(c)));
    t.add(std::move(all));
    os << t.render();
  }
  os << "\nMean best delivery time (min)\n";
  TextTable t(header);
  for (std::size_t bin = 0; bin < r.bin_count(); ++bin) {
    std::vector<std::string> row{labels[bin]};
    for (TimeBucket b : kAllBuckets) row.push_back(num(r.time_cell(bin, b).mean_h() * 60.0, 1));
    row.push_back(num(r.time_by_bin(bin).mean_h() * 60.0, 1));
    t.add(std::move(row));
  }
  std::vector<std::string> all{"all"};
  for (TimeBucket b : kAllBuckets) all.push_back(num(r.time_by_bucket(b).mean_h() * 60.0, 1));
  all.push_back(num(r.time_overall().mean_h() * 60.0, 1));
  t.add(std::move(all));
  os << t.render();

  os << "\nBest first/last-mile mode by zone (time criterion)\n";
  TextTable z({"zone", "name", "orders out/in", "first mile", "last mile", "combined"});
  auto mode_text = [](const std::optional<Mode>& m) {
    return m ? std::string(display_name(*m)) : std::string("no data");
  };
  for (const auto& m : first_last_mode_map(r)) {
    z.add({std::to_string(m.zone), m.name,
           std::to_string(m.originating) + "/" + std::to_string(m.terminating),
           mode_text(m.first_mile), mode_text(m.last_mile), mode_text(m.combined)});
  }
  os << z.render();
  if (r.no_feasible > 0) os << "\nOrders with no feasible alternative: " << r.no_feasible << '\n';
  return os.str();
}

std::string format_comparison(const Comparison& c) {
  std::ostringstream os;
  os << "Mean best delivery time: " << c.before << " vs " << c.after << "\n\n";
  TextTable t({"group", "row", c.before + " min", c.after + " min", "saved min", "saved %"});
  auto add = [&](const char* group, const DeltaRow& r) {
    t.add({group, r.label, num(r.before_h * 60.0, 1), num(r.after_h * 60.0, 1),
           num(r.delta_h * 60.0, 1), num(r.saving_pct, 1)});
  };
  for (const auto& r : c.by_bucket) add("bucket", r);
  for (const auto& r : c.by_bin) add("distance", r);
  add("overall", c.overall);
  os << t.render();
  return os.str();
}

}  // namespace courier::cli
