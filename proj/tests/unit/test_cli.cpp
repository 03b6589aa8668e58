#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cavlat/cli/commands.hpp"

namespace cavlat::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

DataTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cavlat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string meta(const DataTable& t, const std::string& key) {
  const std::string* value = t.find_metadata(key);
  return value ? *value : "<absent>";
}

const std::vector<double>& column(const DataTable& t, const std::string& name) {
  return t.data[t.column_index(name)];
}

TEST_F(CliTest, SpectrumMottInsulatorSinglePeak) {
  const auto r = run({"spectrum", "--state", "mi:1", "--sites", "30", "--illuminated", "15",
                      "--cavity-kind", "traveling", "--kappa", "0.1", "--axis=-2:32:3401"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"detuning", "photon_number"}));
  EXPECT_EQ(t.rows(), 3401u);
  const auto& y = column(t, "photon_number");
  const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
  EXPECT_NEAR(column(t, "detuning")[static_cast<std::size_t>(peak)], 15.0, 1e-9);
  EXPECT_NEAR(y[static_cast<std::size_t>(peak)], 100.0, 1e-9);
  EXPECT_EQ(local_maxima(y).size(), 1u);
  EXPECT_EQ(meta(t, "state"), "mi:1");
  EXPECT_EQ(meta(t, "axis"), "-2:32:3401");
}

TEST_F(CliTest, SpectrumDefaultsAreTheSuperfluidComb) {
  const auto r = run({"spectrum"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  EXPECT_EQ(meta(t, "state"), "sf:30");
  EXPECT_EQ(meta(t, "illuminated"), "15");
  EXPECT_EQ(meta(t, "info.pmf-support"), "31");
  const auto& x = column(t, "detuning");
  const auto& y = column(t, "photon_number");
  // Tail peaks far below the envelope are pulled by their neighbours.
  int central = 0;
  for (std::size_t i : local_maxima(y)) {
    if (x[i] >= 9.0 && x[i] <= 21.0) {
      EXPECT_NEAR(x[i], std::round(x[i]), 0.02);
      ++central;
    }
  }
  EXPECT_EQ(central, 13);
}

TEST_F(CliTest, SpectrumCoherentAndJson) {
  const auto r = run({"spectrum", "--state", "coherent:1", "--format", "json", "--axis", "0:30:301"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["metadata"]["state"], "coherent:1");
  EXPECT_EQ(doc["rows"].size(), 301u);
}

TEST_F(CliTest, AngularTravelingNoiseVanishesAtZeroOrder) {
  const auto r = run({"angular", "--state", "sf:30", "--sites", "30", "--illuminated", "30",
                      "--probe", "traveling:0", "--cavity", "traveling", "--axis", "0:pi:1001"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  EXPECT_EQ(t.columns,
            (std::vector<std::string>{"theta1", "classical_intensity", "noise_R", "photon_number"}));
  const auto& noise = column(t, "noise_R");
  EXPECT_LE(std::abs(noise.front()), 1e-9);
  EXPECT_LE(std::abs(noise.back()), 1e-9);
  EXPECT_NEAR(column(t, "classical_intensity").front(), 900.0, 1e-9);
}

// Standing probe and cavity at 0.1 pi: R peaks at sin(theta1) = 1 where the
// classical pattern has no diffraction order.
TEST_F(CliTest, AngularStandingNoiseFeatureWithoutClassicalPeak) {
  const auto r = run({"angular", "--probe", "standing:0.1pi", "--cavity", "standing"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  const auto& theta = column(t, "theta1");
  const auto& classical = column(t, "classical_intensity");
  const auto& noise = column(t, "noise_R");
  const double classical_max = *std::max_element(classical.begin(), classical.end());
  std::vector<double> sorted = noise;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  bool found = false;
  for (std::size_t i : local_maxima(noise)) {
    if (std::abs(theta[i] - kPi / 2) <= 0.02 * kPi) {
      found = true;
      EXPECT_GT(noise[i], 1.5 * median);
      EXPECT_LT(classical[i], 0.01 * classical_max);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, AngularMottInsulatorIsClassical) {
  const auto r = run({"angular", "--state", "mi:1", "--probe", "standing:0.1pi", "--cavity",
                      "standing", "--axis", "0:pi:201"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  for (double x : column(t, "noise_R")) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST_F(CliTest, OracleCheckPassesAndReports) {
  const auto out = path("report.json");
  const auto r = run({"oracle-check", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(doc["passed"], true);
  EXPECT_EQ(doc["atoms"], 4);
  EXPECT_FALSE(doc["checks"].empty());
}

TEST_F(CliTest, OracleCheckMismatchExitsFive) {
  const auto r = run({"oracle-check", "--atoms", "2", "--sites", "2", "--pairs", "3",
                      "--tolerance", "1e-30", "--pmf-tolerance", "1e-30"});
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.err.find("mismatch"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(r.out)["passed"], false);
}

TEST_F(CliTest, OracleCheckCapacityStillWritesReport) {
  const auto r = run({"oracle-check", "--atoms", "30", "--sites", "30"});
  EXPECT_EQ(r.code, 3);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["passed"], false);
  EXPECT_NE(doc["error"].get<std::string>().find("configurations"), std::string::npos);
}

TEST_F(CliTest, EmitPlotForBothTableKinds) {
  const auto spectrum_csv = path("spec.csv");
  const auto angular_csv = path("ang.csv");
  ASSERT_EQ(run({"spectrum", "--axis", "0:30:31", "--out", spectrum_csv}).code, 0);
  ASSERT_EQ(run({"angular", "--axis", "0:pi:11", "--out", angular_csv}).code, 0);

  ASSERT_EQ(run({"emit-plot", spectrum_csv}).code, 0);
  const std::string spec_script = slurp(path("spec.gp"));
  EXPECT_NE(spec_script.find("'spec.csv'"), std::string::npos);
  EXPECT_NE(spec_script.find("photon_number"), std::string::npos);

  const auto script = path("sub/ang.gp");
  fs::create_directories(dir_ / "sub");
  ASSERT_EQ(run({"emit-plot", angular_csv, "--out", script}).code, 0);
  const std::string ang_script = slurp(script);
  EXPECT_NE(ang_script.find("'../ang.csv'"), std::string::npos);
  EXPECT_NE(ang_script.find("multiplot"), std::string::npos);
  EXPECT_NE(ang_script.find("noise_R"), std::string::npos);
}

TEST_F(CliTest, EmitPlotNamesMissingColumn) {
  std::ofstream(path("bad.csv")) << "# command=angular\ntheta1,classical_intensity\n0,1\n";
  const auto r = run({"emit-plot", path("bad.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("noise_R"), std::string::npos);
}

TEST_F(CliTest, ConfigFileValuesAndFlagOverride) {
  std::ofstream(path("run.cfg")) << "# Mott insulator\nstate = mi:1\nkappa = 0.2\naxis = 10:20:11\n";
  const auto from_file = parse(run({"spectrum", "--config", path("run.cfg")}).out);
  EXPECT_EQ(meta(from_file, "state"), "mi:1");
  EXPECT_EQ(meta(from_file, "kappa"), "0.2");

  const auto r = run({"spectrum", "--config", path("run.cfg"), "--kappa", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse(r.out);
  EXPECT_EQ(meta(t, "kappa"), "0.3");
  EXPECT_EQ(meta(t, "state"), "mi:1");
}

TEST_F(CliTest, ConfigErrorsCarryFileAndLine) {
  std::ofstream(path("bad.cfg")) << "state = mi:1\n\nkappa = -1\n";
  const auto r = run({"spectrum", "--config", path("bad.cfg")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.cfg:3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("kappa"), std::string::npos);

  std::ofstream(path("unknown.cfg")) << "colour = blue\n";
  const auto u = run({"spectrum", "--config", path("unknown.cfg")});
  EXPECT_EQ(u.code, 2);
  EXPECT_NE(u.err.find("unknown.cfg:1"), std::string::npos) << u.err;
}

TEST_F(CliTest, CsvHeaderReproducesTheRun) {
  const auto first = path("first.csv");
  const auto second = path("second.csv");
  ASSERT_EQ(run({"angular", "--probe", "traveling:0.1pi", "--cavity", "standing", "--state",
                 "coherent:0.5", "--axis", "0:pi:51", "--out", first})
                .code,
            0);
  ASSERT_EQ(run({"angular", "--config", first, "--out", second}).code, 0);
  EXPECT_EQ(slurp(first), slurp(second));

  const auto spec = path("spec.csv");
  const auto spec_again = path("spec_again.csv");
  ASSERT_EQ(run({"spectrum", "--statistic", "parity", "--illuminated", "30", "--out", spec}).code, 0);
  ASSERT_EQ(run({"spectrum", "--config", spec, "--out", spec_again}).code, 0);
  EXPECT_EQ(slurp(spec), slurp(spec_again));

  EXPECT_EQ(run({"spectrum", "--config", first}).code, 2);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"spectrum", "--kappa", "zero"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--state", "sf:30", "--sites", "20"}).code, 0);
  EXPECT_EQ(run({"angular", "--illuminated", "31"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--max-support", "5"}).code, 3);
  EXPECT_EQ(run({"spectrum", "--config", path("missing.cfg")}).code, 4);
  EXPECT_EQ(run({"spectrum", "--out", path("no/such/dir/x.csv")}).code, 4);
  EXPECT_EQ(run({"emit-plot", path("missing.csv")}).code, 4);

  const auto r = run({"spectrum", "--axis", "0:1:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--axis"), std::string::npos);
}

TEST_F(CliTest, Version) {
  const auto r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

TEST_F(CliTest, ExecutableIsDeterministic) {
  const std::string exe = CAVLAT_EXE;
  const std::string args = " angular --probe standing:0.1pi --cavity standing --axis 0:pi:101 --out ";
  ASSERT_EQ(std::system((exe + args + path("a.csv")).c_str()), 0);
  ASSERT_EQ(std::system((exe + args + path("b.csv")).c_str()), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_FALSE(slurp(path("a.csv")).empty());
}

}  // namespace
}  // namespace cavlat::cli
