#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "config.hpp"
#include "json.hpp"
#include "runner.hpp"

namespace kglab::scenarios {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch_root() { return fs::temp_directory_path() / ("kglab-test-" + std::to_string(::getpid())); }

// Removes this process's scratch tree at exit.
const struct ScratchCleanup {
  ~ScratchCleanup() {
    std::error_code ec;
    fs::remove_all(scratch_root(), ec);
  }
} cleanup;

fs::path scratch(const std::string& name) {
  const auto dir = scratch_root() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig shipped(const std::string& name) {
  return load_config(fs::path(KG_LAB_SCENARIO_DIR) / (name + ".json"));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KG_LAB_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(RunScenario, OneRecordPerTime) {
  const auto cfg = shipped("packet-continuity");
  const auto r = run_scenario(cfg);
  ASSERT_EQ(r.series.size(), 2u);
  for (const auto& s : r.series) {
    ASSERT_EQ(s.records.size(), cfg.times.size());
    for (std::size_t i = 0; i < cfg.times.size(); ++i) EXPECT_DOUBLE_EQ(s.records[i].t, cfg.times[i]);
  }
}

TEST(RunScenario, SchrodingerSeriesHasNoKleinGordonFields) {
  const auto r = run_scenario(shipped("packet-continuity"));
  const auto& schr = r.series[1];
  EXPECT_EQ(schr.kind, "schrodinger");
  for (const auto& rec : schr.records) {
    EXPECT_TRUE(std::isnan(rec.fields.rho_kg[0]));
    EXPECT_TRUE(std::isnan(rec.fields.rho_amended[0]));
    EXPECT_TRUE(std::isnan(rec.min_rho_kg));
    EXPECT_NEAR(rec.moments.norm, 1.0, 1e-10);
  }
}

TEST(RunScenario, TwoModeReportsNegativeDensity) {
  const auto r = run_scenario(shipped("two-mode"));
  EXPECT_NEAR(r.results["analytic_min_density"].get<double>(), -0.4, 1e-12);
  EXPECT_NEAR(r.results["phase_scan_min_density"].get<double>(), -0.4, 1e-9);
  EXPECT_LT(r.results["min_density"].get<double>(), 0.0);
}

TEST(WriteOutputs, CsvLayout) {
  const auto r = run_scenario(shipped("branch-demo"));
  const auto dir = scratch("csv");
  const auto written = write_outputs(r, dir, OutputFormat::Csv);
  EXPECT_EQ(written.size(), 2 * r.series.size() + 1);

  std::istringstream fields(slurp(dir / "klein_gordon_positive.fields.csv"));
  std::string header;
  std::getline(fields, header);
  EXPECT_EQ(header, "t,x,re_psi,im_psi,rho_nonrel,rho_kg,rho_amended,j_std,j_amended");
  std::size_t rows = 0;
  for (std::string line; std::getline(fields, line);) ++rows;
  EXPECT_EQ(rows, r.config.times.size() * r.config.grid.size());

  std::istringstream summary(slurp(dir / "klein_gordon_negative.summary.csv"));
  std::getline(summary, header);
  EXPECT_EQ(header, "t,norm,centroid,variance,gamma_bar,gamma_spread,continuity_residual,min_rho_kg,argmin_x");

  const auto meta = json::parse(slurp(dir / "metadata.json"));
  EXPECT_EQ(meta["tool"], "kg-lab");
  EXPECT_FALSE(meta["version"].get<std::string>().empty());
  EXPECT_FALSE(meta["config"].contains("output"));
  EXPECT_DOUBLE_EQ(meta["derived"]["gamma"].get<double>(), 1.25);
  EXPECT_EQ(meta["series"].size(), 2u);
}

TEST(WriteOutputs, JsonLayoutMapsNanToNull) {
  const auto r = run_scenario(shipped("packet-continuity"));
  const auto dir = scratch("json");
  write_outputs(r, dir, OutputFormat::Json);
  const auto schr = json::parse(slurp(dir / "schrodinger.summary.json"));
  ASSERT_EQ(schr["records"].size(), r.config.times.size());
  EXPECT_TRUE(schr["records"][0]["gamma_bar"].is_null());
  EXPECT_TRUE(schr["records"][0]["norm"].is_number());
  const auto kg = json::parse(slurp(dir / "klein_gordon.fields.json"));
  EXPECT_EQ(kg["records"][1]["rho_kg"].size(), r.config.grid.size());
}

TEST(WriteOutputs, IdenticalConfigGivesIdenticalBytes) {
  const auto cfg = shipped("superposition-scan");
  const auto a = scratch("det-a");
  const auto b = scratch("det-b");
  const auto wa = write_outputs(run_scenario(cfg), a, OutputFormat::Csv);
  const auto wb = write_outputs(run_scenario(cfg), b, OutputFormat::Csv);
  ASSERT_EQ(wa.size(), wb.size());
  for (std::size_t i = 0; i < wa.size(); ++i) {
    EXPECT_EQ(wa[i].filename(), wb[i].filename());
    EXPECT_EQ(slurp(wa[i]), slurp(wb[i])) << wa[i].filename();
  }
}

TEST(WriteOutputs, UnwritableDirectoryIsAnIoError) {
  const auto dir = scratch("blocked");
  std::ofstream(dir / "file") << "x";
  const auto r = run_scenario(shipped("branch-demo"));
  EXPECT_THROW(write_outputs(r, dir / "file" / "sub", OutputFormat::Csv), IoError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const auto cfg = std::string(KG_LAB_SCENARIO_DIR) + "/branch-demo.json";
  EXPECT_EQ(run_cli("run " + cfg + " --quiet --out " + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "metadata.json"));
  EXPECT_EQ(run_cli("validate " + cfg), 0);
  EXPECT_EQ(run_cli("scenarios"), 0);

  std::ofstream(dir / "bad.json") << R"({"scenario": "branch-demo", "grid": {"n": 1000, "length": 10},
    "state": {"plane_wave": {"k_index": 1}}, "times": [0]})";
  EXPECT_EQ(run_cli("run " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(run_cli("validate " + (dir / "bad.json").string()), 2);

  std::ofstream(dir / "wide.json") << R"({"scenario": "amended", "grid": {"n": 256, "length": 50},
    "state": {"packet": {"x0": 0, "k0": 0, "sigma": 10}}, "times": [0]})";
  EXPECT_EQ(run_cli("run " + (dir / "wide.json").string()), 3);

  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(run_cli("run " + cfg + " --quiet --out " + (dir / "file" / "sub").string()), 4);
  EXPECT_EQ(run_cli("run " + (dir / "missing.json").string()), 4);
  EXPECT_EQ(run_cli("run " + cfg + " --format xml"), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST(Cli, ErrorRecordIsJson) {
  const auto dir = scratch("cli-err");
  std::ofstream(dir / "bad.json") << R"({"scenario": "amended", "typo": 1})";
  const std::string cmd = std::string(KG_LAB_BINARY) + " validate " + (dir / "bad.json").string() + " 2>" +
                          (dir / "err.txt").string();
  ASSERT_NE(std::system(cmd.c_str()), 0);
  const auto err = json::parse(slurp(dir / "err.txt"));
  EXPECT_EQ(err["error"], "config");
  EXPECT_EQ(err["field"], "/typo");
}

}  // namespace
}  // namespace kglab::scenarios
