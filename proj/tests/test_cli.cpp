#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "support/test_support.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mpecpen::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
  return testing_support::fixture_path(name).string();
}

std::string last_line(const std::string& text) {
  const auto end = text.find_last_not_of('\n');
  const auto begin = text.rfind('\n', end);
  return text.substr(begin == std::string::npos ? 0 : begin + 1, end - begin);
}

}  // namespace

TEST(CliOracle, DiagonalExample) {
  const auto r = run({"oracle", "--M", "2 0; 0 1", "--q", "0 1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[0,0]\n");
}

TEST(CliOracle, EmptySetMarker) {
  const auto r = run({"oracle", "--M", "0 -1; 1 0", "--q", "-1 2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[]\n");
}

TEST(CliOracle, ScalarExample) {
  EXPECT_EQ(run({"oracle", "--M", "1", "--q", "0"}).out, "[0]\n");
  EXPECT_EQ(run({"oracle", "--M", "2 0; 0 1", "--q", "-1 1"}).out, "[0.5,0]\n");
}

TEST(CliOracle, MalformedMatrixExitsOne) {
  EXPECT_EQ(run({"oracle", "--M", "1 2; 3", "--q", "0 0"}).code, 1);
  EXPECT_EQ(run({"oracle", "--M", "1 x", "--q", "0"}).code, 1);
  EXPECT_EQ(run({"oracle", "--M", "1 0; 0 1", "--q", "0"}).code, 1);
}

TEST(CliSolve, ParametricFixtureIsFeasible) {
  const auto r = run({"solve", fixture("lcp-param.mpec"), "--gamma", "0.5", "--alpha0", "1"});
  EXPECT_EQ(r.code, 0);
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["classification"], "FeasibleMinimizer");
  EXPECT_LE(report["final_residual"].get<double>(), 1e-8);
  EXPECT_TRUE(report["residual_history"].is_array());
}

TEST(CliSolve, MissingFileExitsOne) {
  const auto r = run({"solve", "missing.mpec"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(CliSolve, ToyWithFixedAlphaExitsTwo) {
  const auto r = run({"solve", fixture("q5-toy.mpec"), "--alpha-fixed", "2", "--start", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["classification"], "InfeasiblePenaltyStationary");
}

TEST(CliSolve, IterationLimitExitsThree) {
  const auto r = run({"solve", fixture("q5-toy.mpec"), "--start", "3", "--alpha-fixed", "2",
                      "--max-inner", "1", "--max-outer", "1"});
  EXPECT_EQ(r.code, 3);
}

TEST(CliSolve, FullStartPointAndBadFlags) {
  const auto r = run({"solve", fixture("bilevel.mpec"), "--residual", "product", "--gamma", "1",
                      "--start", "0 0 0", "--max-outer", "1"});
  EXPECT_LT(json::parse(r.out)["objective_history"][0].get<double>(), 0.0);
  EXPECT_EQ(run({"solve", fixture("bilevel.mpec"), "--start", "0 0"}).code, 1);
  EXPECT_EQ(run({"solve", fixture("bilevel.mpec"), "--norm", "l7"}).code, 1);
  EXPECT_EQ(run({"solve", fixture("bilevel.mpec"), "--gamma", "0"}).code, 1);
}

TEST(CliProbe, AnalyticExponents) {
  const auto lin = json::parse(last_line(run({"probe", "--fixture", "linear-halfspace"}).out));
  EXPECT_NEAR(lin["gamma_hat"].get<double>(), 1.0, 1e-6);
  const auto quad = json::parse(last_line(run({"probe", "--fixture", "quad-scalar"}).out));
  EXPECT_NEAR(quad["gamma_hat"].get<double>(), 0.5, 1e-6);
}

TEST(CliProbe, TableIsTabSeparated) {
  const auto r = run({"probe", "--fixture", "hoffman-halfspace", "--count", "5"});
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "id\tresidual\tdistance");
  int rows = 0;
  while (std::getline(in, line) && line.front() != '{') {
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 2);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(CliProbe, RayRefutesGlobalBound) {
  const auto r = run({"probe", "--ray", "q1"});
  EXPECT_EQ(r.code, 0);
  const auto summary = json::parse(last_line(r.out));
  EXPECT_TRUE(summary["global_bound_refuted"].get<bool>());
  EXPECT_EQ(summary["flags"][0], "GLOBAL-BOUND-REFUTED");
}

TEST(CliProbe, NeedsExactlyOneSource) {
  EXPECT_EQ(run({"probe"}).code, 1);
  EXPECT_EQ(run({"probe", "--fixture", "quad-scalar", "--ray", "q1"}).code, 1);
  EXPECT_EQ(run({"probe", "--fixture", "nope"}).code, 1);
}

TEST(CliReproduce, SingleCasePasses) {
  const auto r = run({"reproduce", "q3-dirderiv", "--fixtures", MPECPEN_FIXTURE_DIR});
  EXPECT_EQ(r.code, 0);
  const auto report = json::parse(r.out);
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["cases"][0]["checks"][0]["actual"], -2.0);
}

TEST(CliReproduce, UnknownCaseExitsOne) {
  const auto r = run({"reproduce", "q9-missing"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown case"), std::string::npos);
}

TEST(CliResidual, OneShotEvaluation) {
  const auto r = run({"residual", fixture("lcp-param.mpec"), "--point", "1 -1 0 0 0",
                      "--residual", "kkt", "--norm", "l1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(r.out)["residual"].get<double>(), 4.0);
  EXPECT_EQ(run({"residual", fixture("lcp-param.mpec"), "--point", "1 2"}).code, 1);
}

TEST(CliUsage, NoSubcommandExitsOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
