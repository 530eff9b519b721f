#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "courier/catalog.hpp"
#include "courier/config.hpp"
#include "courier/engine.hpp"
#include "courier/errors.hpp"
#include "courier/report_io.hpp"
#include "courier/study.hpp"
#include "format.hpp"

namespace courier::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::string city_path;

  // recommend
  std::string from, to, time = "12:00";
  double weight = 0.0;
  double volume = 0.5;
  int rec_replications = 200;

  // simulate / compare
  std::string scenario = "base";
  std::size_t orders = 10'000;
  int replications = 30;
  unsigned workers = 0;
  std::string out_dir = ".";
  std::string bins;
  std::string before, after;

  std::uint64_t seed = 0;
  std::string format = "table";

  // validate / presets
  std::string dataset;
  bool dump_config = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config_error, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config_error, "cannot write " + path.string());
  out << text;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && *begin == ' ') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) throw Error(ErrorKind::invalid_order, what + " is not a number: '" + s + "'");
  return v;
}

GeoPoint parse_point(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorKind::invalid_order, what + " must be given as LAT,LON");
  }
  return {parse_double(s.substr(0, comma), what + " latitude"),
          parse_double(s.substr(comma + 1), what + " longitude")};
}

int parse_clock(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    return static_cast<int>(parse_double(s, "time (minutes since midnight)"));
  }
  const double h = parse_double(s.substr(0, colon), "time hour");
  const double m = parse_double(s.substr(colon + 1), "time minute");
  if (h < 0 || h >= 24 || m < 0 || m >= 60 || h != static_cast<int>(h) || m != static_cast<int>(m)) {
    throw Error(ErrorKind::invalid_order, "time must be HH:MM within one day, got '" + s + "'");
  }
  return static_cast<int>(h) * 60 + static_cast<int>(m);
}

std::vector<double> parse_bins(const std::string& s) {
  std::vector<double> edges;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) edges.push_back(parse_double(item, "bin edge"));
  return edges;
}

struct Context {
  Config config;
  std::optional<CityModel> custom_city;

  const CityModel& city() const { return custom_city ? *custom_city : bundled_city(); }
};

Context load_context(const Options& o) {
  Context ctx;
  if (!o.config_path.empty()) ctx.config = load_config_file(o.config_path);
  if (!o.city_path.empty()) {
    ctx.custom_city = load_city_file(o.city_path);
  } else if (ctx.config.city_path) {
    ctx.custom_city = load_city_file(*ctx.config.city_path);
  }
  return ctx;
}

StudyConfig study_config(const Options& o, const Context& ctx, const std::string& scenario) {
  StudyConfig sc;
  sc.scenario = resolve_scenario(ctx.config, scenario);
  sc.orders = o.orders;
  sc.replications = o.replications;
  sc.seed = o.seed;
  sc.workers = o.workers;
  if (!o.bins.empty()) sc.bin_edges = parse_bins(o.bins);
  return sc;
}

int do_recommend(const Options& o, std::ostream& out) {
  const Context ctx = load_context(o);
  Order order;
  order.origin = parse_point(o.from, "--from");
  order.destination = parse_point(o.to, "--to");
  order.time_of_day_min = parse_clock(o.time);
  order.weight_lbs = o.weight;
  order.volume_cuft = o.volume;
  const ScenarioModel model(ctx.config.params, resolve_scenario(ctx.config, o.scenario));
  const RngStream rng = RngStream(o.seed).derive(0x5245434fULL);
  const Recommendation rec = evaluate_order(order, model, ctx.city(), rng, o.rec_replications);
  if (o.format == "json") {
    out << recommendation_json(rec, ctx.city());
  } else {
    out << format_recommendation(rec, ctx.city());
  }
  return kExitOk;
}

int do_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Context ctx = load_context(o);
  const StudyConfig sc = study_config(o, ctx, o.scenario);
  const StudyReport report = run_study(sc, ctx.city(), ctx.config.params);
  const std::string csv = report_csv(report);
  const std::string json = report_json(report);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const fs::path csv_path = dir / (report_basename(report) + ".csv");
  const fs::path json_path = dir / (report_basename(report) + ".json");
  write_file(csv_path, csv);
  write_file(json_path, json);
  if (o.format == "csv") {
    out << csv;
  } else if (o.format == "json") {
    out << json;
  } else {
    out << format_report(report);
  }
  err << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return kExitOk;
}

StudyReport obtain_report(const Options& o, const Context& ctx, const std::string& what) {
  const fs::path p(what);
  if (p.extension() == ".json" && fs::exists(p)) return report_from_json(read_file(p));
  return run_study(study_config(o, ctx, what), ctx.city(), ctx.config.params);
}

int do_compare(const Options& o, std::ostream& out) {
  const Context ctx = load_context(o);
  const StudyReport a = obtain_report(o, ctx, o.before);
  const StudyReport b = obtain_report(o, ctx, o.after);
  const Comparison cmp = compare_studies(a, b);
  if (o.format == "csv") {
    out << comparison_csv(cmp);
  } else if (o.format == "json") {
    out << comparison_json(cmp);
  } else {
    out << format_comparison(cmp);
  }
  return kExitOk;
}

int do_validate(const Options& o, std::ostream& out) {
  std::string text;
  std::string label;
  if (o.dataset.empty()) {
    text = std::string(bundled_city_document());
    label = "bundled dataset";
  } else {
    text = read_file(o.dataset);
    label = o.dataset;
  }
  const auto issues = check_city_document(text);
  if (issues.empty()) {
    const CityModel city = load_city(text);
    std::size_t subway = 0, air = 0;
    for (const auto& s : city.stations()) (s.network == Network::subway ? subway : air) += 1;
    out << label << ": ok (" << city.zones().size() << " zones, " << subway
        << " subway stations, " << air << " air-taxi stations, circuity " << city.circuity()
        << ")\n";
    return kExitOk;
  }
  out << label << ": " << issues.size() << " problem(s)\n";
  for (const auto& i : issues) out << "  " << i.kind << ": " << i.message << '\n';
  return kExitIssues;
}

int do_presets(const Options& o, std::ostream& out) {
  if (o.dump_config) {
    out << default_config_json();
    return kExitOk;
  }
  const Context ctx = load_context(o);
  TextTable t({"name", "weight mix", "pandemic", "emerging", "alternatives"});
  auto add = [&](const Scenario& s) {
    char mix[16];
    std::snprintf(mix, sizeof mix, "%.2f", s.weight_mix);
    t.add({s.name, mix, s.pandemic ? "yes" : "no", s.emerging ? "yes" : "no",
           std::to_string(catalog(s).size())});
  };
  for (const auto& name : preset_names()) add(*find_preset(name));
  for (const auto& [name, s] : ctx.config.scenarios) add(s);
  out << t.render();
  return kExitOk;
}

std::string key_help() {
  TextTable t({"key", "default", "meaning"});
  for (const auto& d : config_key_docs()) t.add({d.key, d.default_value, d.description});
  return "\nConfiguration keys (JSON file given with --config; `courier presets "
         "--dump-config` prints every key):\n" +
         t.render() +
         "\nExit codes: 0 ok, 1 validation problems, 2 invalid order/config/usage, "
         "3 order outside the service area.\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Instant package delivery alternatives: first/middle/last-mile mode triples "
               "ranked by delivery time, cost and CO2."};
  app.name("courier");
  app.require_subcommand(1);
  app.footer(key_help());
  app.add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--city", o.city_path, "city dataset (default: bundled Manhattan)")
      ->check(CLI::ExistingFile);
  const auto formats = CLI::IsMember({"table", "csv", "json"});

  auto* rec = app.add_subcommand("recommend", "rank every alternative for one order");
  rec->add_option("--from", o.from, "pickup point as LAT,LON")->required();
  rec->add_option("--to", o.to, "drop-off point as LAT,LON")->required();
  rec->add_option("--time", o.time, "time of day, HH:MM")->capture_default_str();
  rec->add_option("--weight", o.weight, "package weight in lbs (1 to 350)")->required();
  rec->add_option("--volume", o.volume, "package volume in cubic feet")->capture_default_str();
  rec->add_option("--scenario", o.scenario, "scenario or preset name")->capture_default_str();
  rec->add_option("--seed", o.seed, "random seed")->capture_default_str();
  rec->add_option("--replications", o.rec_replications, "draws per alternative")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  rec->add_option("--format", o.format, "table or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "json"}));

  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo study and write report files");
  sim->add_option("--scenario", o.scenario, "scenario or preset name")->capture_default_str();
  sim->add_option("--n,--orders", o.orders, "number of sampled orders")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--replications", o.replications, "draws per order and alternative")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "master seed")->capture_default_str();
  sim->add_option("--workers", o.workers, "worker threads, 0 = all cores (never changes results)")
      ->capture_default_str();
  sim->add_option("--bins", o.bins, "distance bin edges in miles, e.g. 1,2,3,4,5,6,7");
  sim->add_option("--out-dir", o.out_dir, "directory for report_<scenario>_<seed>.csv/.json")
      ->capture_default_str();
  sim->add_option("--format", o.format, "stdout format: table, csv or json")
      ->capture_default_str()
      ->check(formats);

  auto* cmp = app.add_subcommand("compare", "compare mean delivery times of two studies");
  cmp->add_option("before", o.before, "scenario name or report .json")->required();
  cmp->add_option("after", o.after, "scenario name or report .json")->required();
  cmp->add_option("--n,--orders", o.orders, "orders per study")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmp->add_option("--replications", o.replications, "draws per order and alternative")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmp->add_option("--seed", o.seed, "master seed")->capture_default_str();
  cmp->add_option("--workers", o.workers, "worker threads")->capture_default_str();
  cmp->add_option("--bins", o.bins, "distance bin edges in miles");
  cmp->add_option("--format", o.format, "table, csv or json")->capture_default_str()->check(formats);

  auto* val = app.add_subcommand("validate", "check a city dataset and list every problem");
  val->add_option("dataset", o.dataset, "dataset path (default: bundled dataset)");

  auto* pre = app.add_subcommand("presets", "list scenario presets");
  pre->add_flag("--dump-config", o.dump_config, "print the full default configuration");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "courier: " << e.what() << "\nRun 'courier --help' for usage.\n";
    return kExitInvalid;
  }

  try {
    if (rec->parsed()) return do_recommend(o, out);
    if (sim->parsed()) return do_simulate(o, out, err);
    if (cmp->parsed()) return do_compare(o, out);
    if (val->parsed()) return do_validate(o, out);
    if (pre->parsed()) return do_presets(o, out);
  } catch (const Error& e) {
    err << "courier: " << e.what() << '\n';
    return e.kind() == ErrorKind::out_of_service_area ? kExitOutOfArea : kExitInvalid;
  } catch (const std::exception& e) {
    err << "courier: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace courier::cli
