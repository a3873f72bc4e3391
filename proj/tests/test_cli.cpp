// Copyright 2026 The phom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "phom/commands.hpp"
#include "phom/errors.hpp"
#include "phom/sample_io.hpp"

namespace phom {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("phom_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST(Config, DefaultsAreTheExperiment) {
  const ExperimentConfig c = parse_config(json::object());
  EXPECT_EQ(c.n_samples, 12000u);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_DOUBLE_EQ(c.source.arm1[1], 0.64);
  ASSERT_EQ(c.windows.size(), 1u);
  EXPECT_TRUE(c.windows[0].contains(1.9));
  EXPECT_DOUBLE_EQ(c.resolved_delta_theta(), 0.0);
  EXPECT_EQ(c.hash(), ExperimentConfig{}.hash());
}

TEST(Config, ParsesNestedSections) {
  const ExperimentConfig c = parse_config(json::parse(R"({
    "source": {"arm1": {"eta": 0.9}, "arm2": {"p": [0.2, 0.5, 0.3]}, "overlap": 0.7, "phase": 1.0},
    "delta_theta": "sq", "n_samples": 500, "seed": 9, "cutoff": 4,
    "windows": [{"lo": 1.0, "hi": 1.5}, {"center": 2.0, "width": 0.4}],
    "sweep": {"deltas": {"start": 0.2, "stop": 1.0, "step": 0.2}, "centers": [1.0, 2.0], "min_count": 5},
    "band": {"runs": 300, "k_sigma": 2.0, "method": "bootstrap"},
    "hom": {"overlaps": [1.0, 0.5, 0.0]}
  })"));
  EXPECT_DOUBLE_EQ(c.source.arm2[2], 0.3);
  EXPECT_DOUBLE_EQ(c.resolved_delta_theta(), -0.5);
  EXPECT_EQ(c.sweep_deltas.size(), 5u);
  EXPECT_EQ(c.band.method, BandMethod::bootstrap);
  EXPECT_EQ(c.windows.size(), 2u);
  EXPECT_NE(c.hash(), ExperimentConfig{}.hash());
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* text : {R"({"seeds": 1})", R"({"source": {"arm1": {"eta": 0.5, "p": [1]}}})",
                           R"({"band": {"runs": 1}})", R"({"grid": {"rnage": 3}})",
                           R"({"n_samples": -4})", R"({"cutoff": 1})",
                           R"({"source": {"arm1": {"p": [0, 0, 0, 0, 1]}, "arm2": {"p": [0, 0, 0, 0, 1]}}})",
                           R"({"windows": [{"lo": 2.5, "hi": 1.9}]})", R"({"delta_theta": "ninety"})"}) {
    EXPECT_THROW(parse_config(json::parse(text)), ConfigError) << text;
  }
}

TEST_F(TempDir, LoadConfigHandlesEmptyAndBrokenFiles) {
  EXPECT_EQ(load_config(write("empty.json", "  \n")).hash(), ExperimentConfig{}.hash());
  EXPECT_THROW(load_config(write("bad.json", "{\"seed\": ")), ConfigError);
  EXPECT_THROW(load_config(dir_ / "missing.json"), ConfigError);
}

TEST(SampleCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<QuadratureSample> xs(300);
  for (auto& s : xs) s = {g(rng), g(rng) * 1e-7};
  xs.push_back({-0.0, 5e-324});
  std::istringstream in(format_samples_csv(xs));
  const auto back = parse_samples_csv(in);
  ASSERT_EQ(back.size(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].x1), std::bit_cast<std::uint64_t>(xs[i].x1));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].x2), std::bit_cast<std::uint64_t>(xs[i].x2));
  }
}

TEST(SampleCsv, ReportsLineNumbers) {
  const auto error_for = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_samples_csv(in);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(error_for("x1,x2\n0.1,0.2\n0.3\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_for("x1,x2\n0.1,abc\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_for("a,b\n0,0\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_for("x1,x2\n1,2,3\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_for("x1,x2\nnan,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_for("").find("empty"), std::string::npos);
  EXPECT_NE(error_for("x1,x2\n").find("no records"), std::string::npos);
  EXPECT_EQ(error_for("x1,x2\r\n0.5,1\r\n\n"), "no error");
}

TEST_F(TempDir, SimulateIsByteReproducible) {
  const fs::path cfg = write("c.json", R"({"n_samples": 3000})");
  std::ostringstream out1, out2, err;
  CommandOptions o{.config = cfg, .out = dir_ / "a.csv", .seed = 5};
  ASSERT_EQ(cmd_simulate(o, out1, err), kExitOk) << err.str();
  o.out = dir_ / "b.csv";
  ASSERT_EQ(cmd_simulate(o, out2, err), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_NE(out1.str().find("seed 5"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "a.csv.partial"));
  o.seed = 6;
  o.out = dir_ / "c.csv";
  ASSERT_EQ(cmd_simulate(o, out2, err), kExitOk);
  EXPECT_NE(slurp(dir_ / "a.csv"), slurp(dir_ / "c.csv"));
}

TEST_F(TempDir, AnalyzeWritesReportAndPlots) {
  std::ostringstream out, err;
  CommandOptions sim{.out = dir_ / "s.csv"};
  ASSERT_EQ(cmd_simulate(sim, out, err), kExitOk) << err.str();
  CommandOptions o{.in = dir_ / "s.csv", .out = dir_ / "r.json", .plots = dir_ / "p"};
  ASSERT_EQ(cmd_analyze(o, out, err), kExitOk) << err.str();
  const json r = json::parse(slurp(dir_ / "r.json"));
  EXPECT_EQ(r["n_samples"], 12000);
  EXPECT_EQ(r["config_hash"], ExperimentConfig{}.hash());
  const json& w = r["windows"][0];
  EXPECT_LT(w["estimate"].get<double>(), 0.5);
  EXPECT_LT(w["band_lo"].get<double>(), w["estimate"].get<double>());
  EXPECT_NE(out.str().find("witness violated: "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "p_histogram.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "p_curve.csv"));
  // Same inputs, same report.
  o.out = dir_ / "r2.json";
  ASSERT_EQ(cmd_analyze(o, out, err), kExitOk);
  EXPECT_EQ(slurp(dir_ / "r.json"), slurp(dir_ / "r2.json"));
}

TEST_F(TempDir, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(CommandOptions{}, out, err), kExitConfig);  // no --out
  EXPECT_EQ(cmd_analyze(CommandOptions{.config = write("x.json", R"({"bogus": 1})"),
                                       .in = write("s.csv", "x1,x2\n0,0\n")},
                        out, err),
            kExitConfig);
  EXPECT_EQ(cmd_analyze(CommandOptions{.in = write("bad.csv", "x1,x2\n0,zz\n")}, out, err), kExitData);
  EXPECT_EQ(cmd_analyze(CommandOptions{.in = dir_ / "nope.csv"}, out, err), kExitData);
  EXPECT_EQ(cmd_analyze(CommandOptions{.in = write("far.csv", "x1,x2\n0,0\n1,0.1\n")}, out, err),
            kExitNumerical);
  EXPECT_EQ(cmd_analyze(CommandOptions{.in = dir_ / "s.csv", .window = std::pair{2.5, 1.9}}, out, err),
            kExitConfig);
  EXPECT_NE(err.str().find("data error"), std::string::npos);
}

TEST_F(TempDir, HomReportsDipAndVisibility) {
  std::ostringstream out, err;
  const fs::path cfg = write("h.json", R"({"source": {"arm1": {"eta": 1}, "arm2": {"eta": 1}},
                                           "hom": {"overlaps": [0.6]}})");
  ASSERT_EQ(cmd_hom(CommandOptions{.config = cfg, .out = dir_ / "h.csv"}, out, err), kExitOk) << err.str();
  const std::string csv = slurp(dir_ / "h.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "xi,p00,p01,p10,p11");
  EXPECT_NE(csv.find(",0.32\n"), std::string::npos) << csv;
  EXPECT_NE(out.str().find("visibility 0\n"), std::string::npos) << out.str();
}

TEST_F(TempDir, SweepSelectsAWidth) {
  std::ostringstream out, err;
  const fs::path cfg = write("s.json", R"({"n_samples": 4000, "sweep": {"deltas": [0.4, 0.8]}})");
  ASSERT_EQ(cmd_sweep(CommandOptions{.config = cfg, .out = dir_ / "w.csv"}, out, err), kExitOk)
      << err.str();
  EXPECT_NE(out.str().find("selected delta "), std::string::npos);
  std::istringstream rows(slurp(dir_ / "w.csv"));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) ++count;
  EXPECT_EQ(count, 3);
}

}  // namespace
}  // namespace phom
