#include "app.hpp"
#include "commands.hpp"
#include "confstab/error.hpp"
#include "record.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace confstab::cli {
namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "confstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool has_warning(const Json& j, const std::string& w) {
  for (const auto& x : j["warnings"])
    if (x == w) return true;
  return false;
}

TEST(Record, SchemaKeysInOrder) {
  const Invocation r = invoke({"constants", "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"command", "params", "results", "residuals", "warnings",
                                            "seed", "version"}));
  EXPECT_EQ(j["command"], "constants");
  EXPECT_EQ(j["results"]["rows"].size(), 1u);
  EXPECT_EQ(j["results"]["rows"][0]["n"], 1);
}

TEST(Record, CsvUsesSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(std::sqrt(2.0))), std::sqrt(2.0));
}

TEST(Record, NonFiniteBecomesNull) {
  EXPECT_TRUE(number(std::nan("")).is_null());
  EXPECT_EQ(number(2.5), 2.5);
}

TEST(Constants, FourHasBothSplits) {
  const Json j = invoke({"constants", "--m", "4"}).json();
  ASSERT_EQ(j["results"]["rows"].size(), 2u);
  EXPECT_NEAR(j["results"]["rows"][0]["c_sharp"].get<double>(), 1.2, 1e-12);
  EXPECT_NEAR(j["results"]["rows"][1]["c_sharp"].get<double>(), std::sqrt(5.0) - 1.0, 1e-12);
}

TEST(Constants, CsvRange) {
  const Invocation r = invoke({"constants", "--m", "6..8", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "m,n,p,xi,eps0,c2,c1,c_sharp,c_rough");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 4 + 5 + 6);
}

TEST(Constants, BadRangeIsUsageError) {
  EXPECT_EQ(invoke({"constants", "--m", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"constants", "--m", "x..5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"constants", "--m", "8..6"}).code, kExitUsage);
}

TEST(Constants, ParseRange) {
  const ConstantsOptions o = parse_m_range("3..12");
  EXPECT_EQ(o.m_first, 3);
  EXPECT_EQ(o.m_last, 12);
  EXPECT_THROW(parse_m_range("4.5"), Error);
}

TEST(Ellipsoid, RoundSphere) {
  const Invocation r = invoke({"ellipsoid", "--a", "1", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_LE(j["results"]["max_conf_ii"]["max_value"].get<double>(), 1e-12);
  EXPECT_EQ(j["results"]["max_conf_ii"]["agrees"], true);
  EXPECT_TRUE(j["warnings"].empty());
}

TEST(Ellipsoid, ProlateAgrees) {
  const Json j = invoke({"ellipsoid", "--a", "2", "--n", "4"}).json();
  EXPECT_NEAR(j["results"]["max_conf_ii"]["max_value"].get<double>(), 36.0, 1e-6);
  EXPECT_EQ(j["results"]["max_conf_ii"]["agrees"], true);
  EXPECT_EQ(j["results"]["pinching_delta"], 0.015625);
}

TEST(Ellipsoid, OblateFlagsDisagreementWithoutFailing) {
  const Invocation r = invoke({"ellipsoid", "--a", "0.5", "--n", "4"});
  EXPECT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_TRUE(has_warning(j, "paper_closed_form_disagreement"));
  EXPECT_NEAR(j["results"]["max_conf_ii"]["max_value"].get<double>(), 9.0, 1e-12);
  EXPECT_EQ(j["results"]["max_conf_ii"]["agrees"], false);
}

TEST(Ellipsoid, GridColumnsAndPlot) {
  const Invocation csv = invoke({"ellipsoid", "--a", "0.8", "--grid", "11", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "t,G,htilde_sq");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 12);
  const Invocation plot = invoke({"ellipsoid", "--a", "0.8", "--grid", "11", "--format", "plot"});
  std::istringstream lines(plot.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "# t htilde_sq");
  std::getline(lines, line);
  double t = -1.0;
  double h = -1.0;
  std::istringstream(line) >> t >> h;
  EXPECT_EQ(t, 0.0);
  EXPECT_NEAR(h, std::pow(1.0 - 0.64, 2) / std::pow(0.8, 4), 1e-14);
}

TEST(Ellipsoid, DimensionOneIsRejected) {
  EXPECT_EQ(invoke({"ellipsoid", "--n", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ellipsoid", "--a", "-1"}).code, kExitUsage);
}

TEST(Verify, CurvatureSpherePasses) {
  const Invocation r = invoke({"verify", "--case", "curvature:sphere"});
  ASSERT_EQ(r.code, 0) << r.out;
  const Json j = r.json();
  EXPECT_EQ(j["residuals"][0]["identity"], "curvature_law");
  EXPECT_EQ(j["residuals"][0]["tolerance"], 1e-5);
  bool has_constant = false;
  for (const auto& rep : j["residuals"]) has_constant |= rep["identity"] == "constant_sectional_curvature";
  EXPECT_TRUE(has_constant);
}

TEST(Verify, GaussEllipsoidPasses) {
  const Invocation r = invoke({"verify", "--case", "gauss:ellipsoid", "--a", "0.8"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["residuals"][0]["tolerance"], 1e-5);
}

TEST(Verify, GradSpherePasses) {
  const Invocation r = invoke({"verify", "--case", "grad:sphere", "--step", "1e-4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["residuals"][0]["tolerance"], 1e-6);
}

TEST(Verify, EveryCaseRuns) {
  for (const char* kind : {"grad", "hessian", "curvature", "gauss", "pinch"})
    for (const char* base : {"sphere", "ellipsoid"}) {
      const std::string c = std::string(kind) + ":" + base;
      const Invocation r = invoke({"verify", "--case", c, "--points", "4"});
      EXPECT_EQ(r.code, 0) << c << "\n" << r.out << r.err;
    }
}

TEST(Verify, PinchEllipsoidReportsTheCitedInterval) {
  const Json j = invoke({"verify", "--case", "pinch:ellipsoid", "--a", "0.8", "--points", "6"}).json();
  EXPECT_NEAR(j["results"]["stated_sectional_bounds"][0].get<double>(), 0.64, 1e-15);
  EXPECT_GE(j["results"]["k_min"].get<double>(), 0.64 - 1e-3);
}

TEST(Verify, UnknownCase) {
  const Invocation r = invoke({"verify", "--case", "torsion:sphere"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("unknown-case"), std::string::npos);
  EXPECT_EQ(invoke({"verify", "--case", "grad:torus"}).code, kExitUsage);
}

TEST(Verify, ResidualFailureExitsWithOne) {
  // a step this coarse cannot meet the first-order tolerance on the curved base
  const Invocation r = invoke({"verify", "--case", "curvature:sphere", "--step", "0.02", "--points", "3"});
  EXPECT_EQ(r.code, kExitResidualFailure);
  EXPECT_EQ(r.json()["results"]["pass"], false);
}

TEST(Range, ClosedFormBasis) {
  const Json j = invoke({"range", "--threshold", "auto", "--basis", "paper"}).json();
  ASSERT_EQ(j["results"]["ranges"].size(), 1u);
  EXPECT_NEAR(j["results"]["ranges"][0]["a1"].get<double>(), 0.593, 1e-3);
  EXPECT_NEAR(j["results"]["ranges"][0]["a2"].get<double>(), 1.346, 1e-3);
  EXPECT_NEAR(j["results"]["threshold"].get<double>(), 1.2, 1e-15);
}

TEST(Range, MeasuredBasisWarns) {
  const Invocation r = invoke({"range", "--threshold", "auto", "--basis", "measured"});
  EXPECT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_NEAR(j["results"]["ranges"][0]["a2"].get<double>(), 1.346, 1e-3);
  EXPECT_TRUE(has_warning(j, "measured_a1_differs_from_paper_closed_form"));
}

TEST(Range, BothBases) {
  const Json j = invoke({"range"}).json();
  EXPECT_EQ(j["results"]["ranges"].size(), 2u);
  EXPECT_EQ(j["results"]["ranges"][0]["basis"], "paper_closed_form");
  EXPECT_EQ(j["results"]["ranges"][1]["basis"], "measured_max");
}

TEST(Range, ExtremeThresholdDoesNotCrash) {
  const Invocation r = invoke({"range", "--threshold", "1e9"});
  EXPECT_TRUE(r.code == 0 || r.code == kExitUsage);
  const Invocation unreachable = invoke({"range", "--threshold", "1e40", "--basis", "paper"});
  EXPECT_EQ(unreachable.code, kExitUsage);
  EXPECT_NE(unreachable.err.find("threshold-unreachable"), std::string::npos);
  EXPECT_EQ(invoke({"range", "--threshold", "abc"}).code, kExitUsage);
}

TEST(Audit, TwoTwoHasNoViolations) {
  const Json j = invoke({"audit", "--n", "2", "--p", "2", "--q", "1", "--iters", "100000", "--seed", "0"}).json();
  EXPECT_EQ(j["results"]["violations"], 0);
}

TEST(Audit, OneFourBelowC1) {
  const Json j = invoke({"audit", "--n", "1", "--p", "4", "--q", "2", "--iters", "20000"}).json();
  EXPECT_NEAR(j["results"]["c1"].get<double>(), 0.75, 1e-15);
  EXPECT_LE(j["results"]["max_ratio"].get<double>(), 0.75 + 1e-10);
}

TEST(Audit, ZeroIterationsIsAnError) {
  const Invocation r = invoke({"audit", "--iters", "0"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("invalid-argument"), std::string::npos);
}

TEST(Seed, FlagBeatsEnvironment) {
  ::setenv("CONFSTAB_SEED", "5", 1);
  EXPECT_EQ(invoke({"audit", "--iters", "10"}).json()["seed"], 5);
  EXPECT_EQ(invoke({"audit", "--iters", "10", "--seed", "9"}).json()["seed"], 9);
  ::unsetenv("CONFSTAB_SEED");
  EXPECT_EQ(invoke({"audit", "--iters", "10"}).json()["seed"], 0);
}

TEST(Seed, ChangesTheAuditSample) {
  const Json a = invoke({"audit", "--iters", "500", "--seed", "1"}).json();
  const Json b = invoke({"audit", "--iters", "500", "--seed", "2"}).json();
  EXPECT_NE(a["results"]["max_ratio"], b["results"]["max_ratio"]);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"constants", "--m", "3..9"},
      {"ellipsoid", "--a", "0.8"},
      {"verify", "--case", "pinch:ellipsoid", "--points", "5", "--seed", "3"},
      {"range", "--threshold", "auto"},
      {"audit", "--n", "2", "--p", "3", "--q", "2", "--iters", "5000", "--seed", "11"}};
  for (const auto& c : commands) {
    const Invocation first = invoke(c);
    const Invocation second = invoke(c);
    EXPECT_EQ(first.out, second.out) << c[0];
    EXPECT_EQ(first.code, second.code);
  }
}

TEST(Output, OutFileReplacesStdout) {
  const auto path = std::filesystem::temp_directory_path() / "confstab_cli_test.json";
  std::filesystem::remove(path);
  const Invocation r = invoke({"constants", "--m", "4", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream text;
  text << f.rdbuf();
  EXPECT_EQ(Json::parse(text.str())["command"], "constants");
  std::filesystem::remove(path);
}

TEST(Usage, MissingSubcommandAndBadFormat) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"constants", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace confstab::cli
