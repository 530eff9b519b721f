#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "courier/config.hpp"
#include "courier/report_io.hpp"
#include "courier_test.hpp"

namespace courier {
namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("courier_cli_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

const std::vector<std::string> kMidtownToDowntown = {"recommend", "--from", "40.758,-73.9855",
                                                     "--to", "40.7128,-74.006"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& more) {
  a.insert(a.end(), more.begin(), more.end());
  return a;
}

TEST(Cli, RecommendPrintsWinners) {
  const CliResult r = invoke(with(kMidtownToDowntown, {"--weight", "10", "--replications", "20"}));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Best alternatives"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("car → car → car"), std::string::npos);
}

TEST(Cli, LongTripBestTimeIsCar) {
  const CliResult r = invoke({"recommend", "--from", "40.7075,-74.0110", "--to", "40.8480,-73.9370",
                     "--weight", "10", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_GT(j["direct_distance_mi"].get<double>(), 7.0);
  EXPECT_EQ(j["best_time"]["alternative"], "car->car->car");
}

TEST(Cli, OverweightIsInvalidOrder) {
  const CliResult r = invoke(with(kMidtownToDowntown, {"--weight", "400"}));
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("350"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("InvalidOrder"), std::string::npos) << r.err;
}

TEST(Cli, OutsideServiceArea) {
  const CliResult r = invoke({"recommend", "--from", "40.60,-73.70", "--to", "40.7128,-74.006", "--weight",
                     "3"});
  EXPECT_EQ(r.code, cli::kExitOutOfArea);
  EXPECT_NE(r.err.find("OutOfServiceArea"), std::string::npos);
}

TEST(Cli, JsonRoundTrips) {
  const CliResult r = invoke(with(kMidtownToDowntown, {"--weight", "10", "--format", "json",
                                              "--replications", "10", "--seed", "4"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(j["evaluations"].size(), 35u);
  EXPECT_EQ(j["replications"], 10);
  // Reproducible from arguments and seed alone.
  EXPECT_EQ(invoke(with(kMidtownToDowntown, {"--weight", "10", "--format", "json", "--replications",
                                          "10", "--seed", "4"}))
                .out,
            r.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"recommend", "--bogus"}).code, cli::kExitInvalid);
  EXPECT_EQ(invoke(with(kMidtownToDowntown, {"--weight", "10", "--time", "25:00"})).code,
            cli::kExitInvalid);
  EXPECT_EQ(invoke(with(kMidtownToDowntown, {"--weight", "heavy"})).code, cli::kExitInvalid);
  EXPECT_EQ(invoke({"simulate", "--scenario", "nope"}).code, cli::kExitInvalid);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInvalid);
}

TEST(Cli, HelpDocumentsCalibrationKeys) {
  const CliResult r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& doc : config_key_docs()) {
    EXPECT_NE(r.out.find(doc.key), std::string::npos) << doc.key;
  }
  EXPECT_NE(r.out.find("Exit codes"), std::string::npos);
}

TEST(Cli, SimulateTwiceGivesIdenticalFiles) {
  TempDir a("sim_a"), b("sim_b");
  for (const TempDir* d : {&a, &b}) {
    const CliResult r = invoke({"simulate", "--scenario", "pandemic", "--n", "300", "--seed", "7",
                       "--replications", "5", "--out-dir", d->str(), "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* ext : {".csv", ".json"}) {
    const auto name = std::string("report_pandemic_7") + ext;
    ASSERT_TRUE(std::filesystem::exists(a.path() / name)) << name;
    EXPECT_EQ(test::read_file(a.path() / name), test::read_file(b.path() / name)) << name;
  }
}

TEST(Cli, WorkerCountDoesNotChangeFiles) {
  TempDir a("w1"), b("w4");
  invoke({"simulate", "--n", "200", "--replications", "4", "--workers", "1", "--out-dir", a.str()});
  invoke({"simulate", "--n", "200", "--replications", "4", "--workers", "4", "--out-dir", b.str()});
  EXPECT_EQ(test::read_file(a.path() / "report_base_0.json"),
            test::read_file(b.path() / "report_base_0.json"));
}

TEST(Cli, Ws1MetadataCarriesWeightMix) {
  TempDir d("ws1");
  const CliResult r = invoke({"simulate", "--scenario", "ws1", "--n", "100", "--replications", "2",
                     "--out-dir", d.str(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = report_from_json(test::read_file(d.path() / "report_ws1_0.json"));
  EXPECT_DOUBLE_EQ(rep.weight_mix, 0.15);
  EXPECT_EQ(nlohmann::json::parse(r.out)["metadata"]["weight_mix"], 0.15);
}

TEST(Cli, EmergingCoversAllAlternatives) {
  TempDir d("emerging");
  const CliResult r = invoke({"simulate", "--scenario", "emerging", "--n", "60", "--replications", "2",
                     "--out-dir", d.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = report_from_json(test::read_file(d.path() / "report_emerging_0.json"));
  EXPECT_EQ(rep.alternatives, 78);
  EXPECT_EQ(rep.cells[0][0][0].wins.size(), 79u);
}

TEST(Cli, CompareScenarios) {
  const CliResult r = invoke({"compare", "base", "pandemic", "--n", "150", "--replications", "3",
                             "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["by_bucket"].size(), 4u);
  EXPECT_GT(j["overall"]["delta_min"].get<double>(), 0.0);
}

TEST(Cli, ValidateDatasets) {
  EXPECT_EQ(invoke({"validate"}).code, 0);
  EXPECT_EQ(invoke({"validate", test::fixture("minimal_city.json").string()}).code, 0);
  const CliResult open = invoke({"validate", test::fixture("open_polygon.json").string()});
  EXPECT_EQ(open.code, cli::kExitIssues);
  EXPECT_NE(open.out.find("InvalidGeometry"), std::string::npos) << open.out;
  const CliResult orphan = invoke({"validate", test::fixture("orphan_station.json").string()});
  EXPECT_EQ(orphan.code, cli::kExitIssues);
  EXPECT_NE(orphan.out.find("OrphanStation"), std::string::npos) << orphan.out;
}

TEST(Cli, ConfigErrorsExitTwoWithDiagnostics) {
  TempDir d("config");
  const auto file = d.path() / "bad.json";
  std::ofstream(file) << "{\n  \"costs\": {\"bus_fare\": -1}\n}\n";
  const CliResult r = invoke({"--config", file.string(), "recommend", "--from", "40.758,-73.9855", "--to",
                     "40.7128,-74.006", "--weight", "3"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("costs.bus_fare"), std::string::npos) << r.err;
}

TEST(Cli, PresetsListsScenarios) {
  const CliResult r = invoke({"presets"});
  EXPECT_EQ(r.code, 0);
  for (const char* n : {"base", "ws1", "ws4", "pandemic", "emerging"}) {
    EXPECT_NE(r.out.find(n), std::string::npos) << n;
  }
  EXPECT_TRUE(nlohmann::json::accept(invoke({"presets", "--dump-config"}).out));
}

}  // namespace
}  // namespace courier
