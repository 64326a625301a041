#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gaugeband/gaugeband.hpp"

using namespace gaugeband;
using nlohmann::json;

namespace {

json Doc(const std::string& experiment, const std::string& out) {
  json d = json::parse(R"({
    "lattice": [[6.283185307179586]],
    "potential": {"v": [{"m": [0], "re": 1.0}, {"m": [1], "re": -0.5}], "w3": [{"m": [0], "re": 2.0}]}
  })");
  d["experiment"] = experiment;
  d["output"] = {{"dir", out}};
  return d;
}

std::filesystem::path TempDir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("gaugeband_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

json ReadJson(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST(FitPower, ExactPowerLaw) {
  const PowerFit f = FitPower({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0});
  EXPECT_NEAR(f.exponent, 2.0, 1e-12);
  EXPECT_NEAR(f.constant, 3.0, 1e-12);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
}

TEST(FitPower, RejectsBadInput) {
  EXPECT_THROW(FitPower({1.0, 2.0}, {1.0, 2.0}), Error);
  EXPECT_THROW(FitPower({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}), Error);
}

TEST(Richardson, QuadraticIsExactAtOrderTwo) {
  const std::vector<double> hs{0.4, 0.3, 0.2, 0.1};
  std::vector<double> v;
  for (double h : hs) v.push_back(1.5 - 2.0 * h + 0.7 * h * h);
  const Extrapolation e = Richardson(hs, v, 2);
  EXPECT_NEAR(e.limit, 1.5, 1e-12);
  EXPECT_NEAR(Richardson(hs, v, 3).error, 0.0, 1e-12);
}

TEST(Richardson, RequiresDecreasingH) {
  EXPECT_THROW(Richardson({0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}, 1), Error);
  EXPECT_THROW(Richardson({0.3, 0.2, 0.1}, {1.0, 1.0, 1.0}, 3), Error);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(Fnv1a(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1a("a"), "af63dc4c8601ec8c");
}

TEST(ParseConfig, DefaultsAndInferredDimension) {
  json d = Doc("bands", "x");
  d.erase("lattice");
  const ExperimentConfig c = ParseConfig(d);
  EXPECT_EQ(c.dim(), 1);
  EXPECT_NEAR(c.basis(0, 0), kTwoPi, 1e-15);
  EXPECT_EQ(c.M, 64);
  EXPECT_EQ(c.HList(), (std::vector<double>{0.6, 0.5, 0.4, 0.3, 0.25}));
  EXPECT_NEAR(c.DirichletL(), 0.45 * kTwoPi, 1e-14);
  EXPECT_NEAR(c.Potential().Lower(Vec::Constant(1, 0.0)), -2.0, 1e-14);
}

TEST(ParseConfig, TwoDimensionalDefaults) {
  const json d = json::parse(R"({
    "experiment": "agmon",
    "lattice": [[6.283185307179586, 0], [0, 6.283185307179586]],
    "potential": {"v": [{"m": [0, 0], "re": 2.0}, {"m": [1, 0], "re": -0.5}, {"m": [0, 1], "re": -0.5}],
                  "w3": [{"m": [0, 0], "re": 1.0}]},
    "numerics": {"Q": 64},
    "expect": {"S0": 5.656854249492381, "multiplicity": 4}
  })");
  const ExperimentConfig c = ParseConfig(d);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(c.M, 16);
  EXPECT_EQ(c.Q, 64);
  EXPECT_EQ(*c.expect.multiplicity, 4);
}

TEST(ParseConfig, Errors) {
  json unknown = Doc("bands", "x");
  unknown["numerics"] = {{"cutof", 3}};
  EXPECT_THROW(ParseConfig(unknown), Error);
  json top = Doc("bands", "x");
  top["extra"] = 1;
  EXPECT_THROW(ParseConfig(top), Error);
  json neg = Doc("bands", "x");
  neg["numerics"] = {{"h_list", {0.3, -0.1}}};
  EXPECT_THROW(ParseConfig(neg), Error);
  json branch = Doc("bands", "x");
  branch["numerics"] = {{"branch", "c"}};
  EXPECT_THROW(ParseConfig(branch), Error);
  json nopot = Doc("bands", "x");
  nopot.erase("potential");
  EXPECT_THROW(ParseConfig(nopot), Error);
  json wrongtype = Doc("bands", "x");
  wrongtype["numerics"] = {{"M", "many"}};
  EXPECT_THROW(ParseConfig(wrongtype), Error);
  json term = Doc("bands", "x");
  term["potential"]["v"][0]["real"] = 1.0;
  EXPECT_THROW(ParseConfig(term), Error);
  EXPECT_THROW(LoadConfig("/nonexistent/config.json"), Error);
}

TEST(ParseConfig, EffectiveConfigRoundTrips) {
  const ExperimentConfig c = ParseConfig(Doc("wkb", "x"));
  const ExperimentConfig c2 = ParseConfig(ToJson(c));
  EXPECT_EQ(ToJson(c).dump(), ToJson(c2).dump());
}

TEST(Run, ValidateWritesReport) {
  const auto dir = TempDir("validate");
  const ExperimentConfig c = ParseConfig(Doc("validate", dir.string()));
  EXPECT_EQ(gaugeband::Run(c), 0);
  const json r = ReadJson(dir / "report.json");
  EXPECT_EQ(r["status"], "passed");
  EXPECT_NEAR(r["results"]["E0"].get<double>(), -2.0, 1e-12);
  EXPECT_NEAR(r["results"]["tau"][0].get<double>(), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(r["results"]["min_norm_w"].get<double>(), 2.0, 1e-12);
  EXPECT_TRUE(r.contains("content_hash"));
  EXPECT_TRUE(r.contains("timing"));
  for (const auto& e : std::filesystem::directory_iterator(dir)) EXPECT_EQ(e.path().filename(), "report.json");
}

TEST(Run, ContentHashIsDeterministic) {
  const auto dir = TempDir("determinism");
  json d = Doc("agmon", dir.string());
  const ExperimentConfig c = ParseConfig(d);
  ASSERT_EQ(gaugeband::Run(c), 0);
  const std::string h1 = ReadJson(dir / "report.json")["content_hash"];
  ASSERT_EQ(gaugeband::Run(c), 0);
  const std::string h2 = ReadJson(dir / "report.json")["content_hash"];
  EXPECT_EQ(h1, h2);
}

TEST(Run, ThresholdFailureExitCode) {
  const auto dir = TempDir("thresholds");
  json d = Doc("agmon", dir.string());
  d["expect"] = {{"S0", 7.0}};
  EXPECT_EQ(gaugeband::Run(ParseConfig(d)), 2);
  EXPECT_EQ(ReadJson(dir / "report.json")["status"], "thresholds_failed");
}

TEST(Run, ModuleErrorExitCode) {
  const auto dir = TempDir("error");
  json d = Doc("bands", dir.string());
  d["potential"]["w3"] = json::array();
  d["potential"]["w1"] = {{{"m", {1}}, {"re", 0.5}}};
  EXPECT_EQ(gaugeband::Run(ParseConfig(d)), 1);
  const json r = ReadJson(dir / "report.json");
  EXPECT_EQ(r["status"], "failed");
  EXPECT_NE(r["error"].get<std::string>().find("experiment bands"), std::string::npos);
}

TEST(WriteAtomically, ReplacesWholeFile) {
  const auto dir = TempDir("atomic");
  const auto p = dir / "f.txt";
  WriteAtomically(p, [](std::ostream& os) { os << "first, a longer line\n"; });
  WriteAtomically(p, [](std::ostream& os) { os << "second\n"; });
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(s, "second\n");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), {}), 1);
}
