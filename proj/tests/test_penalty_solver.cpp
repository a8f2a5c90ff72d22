#include <gtest/gtest.h>

#include <cmath>

#include "mpecpen/errors.hpp"
#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/penalty_solver.hpp"
#include "support/test_support.hpp"

using namespace mpecpen;
using testing_support::load_fixture;
using testing_support::vec;
using testing_support::zero_point;

namespace {

const ResidualSpec kProduct1{ResidualKind::Product, Norm::L2, 1.0, StationarityForm::Norm};
const ResidualSpec kProductHalf{ResidualKind::Product, Norm::L2, 0.5, StationarityForm::Norm};

PenaltyConfig fixed(double alpha, ResidualSpec spec) {
  PenaltyConfig c;
  c.alpha0 = alpha;
  c.alpha_fixed = true;
  c.residual = spec;
  return c;
}

}  // namespace

TEST(PenaltyConfig, Validation) {
  EXPECT_NO_THROW(PenaltyConfig{}.validate());
  PenaltyConfig c;
  c.alpha0 = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.growth = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.eps_feas = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.residual.gamma = 2.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(InnerMinimize, SquareRootBilevelReachesZero) {
  const auto p = load_fixture("bilevel.mpec");
  const KktPoint z = inner_minimize(p, 2.0, kProductHalf, KktPoint{vec({1}), vec({1}), vec({1})},
                                    5000, 1e-10);
  EXPECT_NEAR(penalized_objective(p, z, 2.0, kProductHalf), 0.0, 1e-4);
}

TEST(InnerMinimize, ZeroAlphaMinimizesObjectiveAlone) {
  const auto p = load_fixture("lcp-param.mpec");
  const ResidualSpec spec{};
  const KktPoint z = inner_minimize(p, 0.0, spec, default_start(p, vec({2})), 5000, 1e-10);
  // (x-1)^2 + 2 y1 + y2 over the box: x = 1, y = 0.
  EXPECT_NEAR(p.objective().value(z.x, z.y), 0.0, 1e-9);
  EXPECT_NEAR(z.x[0], 1.0, 1e-5);
}

TEST(InnerMinimize, ZeroBudgetReturnsStart) {
  const auto p = load_fixture("addq1.mpec");
  const KktPoint z0{vec({0.3}), vec({1, 1}), vec({0.5, 0.5})};
  EXPECT_EQ(inner_minimize(p, 1.0, ResidualSpec{}, z0, 0, 1e-10), z0);
}

TEST(InnerMinimize, StartOutsideBoxThrows) {
  const auto p = load_fixture("addq1.mpec");
  EXPECT_THROW(inner_minimize(p, 1.0, ResidualSpec{}, KktPoint{vec({5}), vec({0, 0}), vec({0, 0})},
                              10, 1e-10),
               InvalidArgument);
}

TEST(InnerMinimize, TraceIsMonotoneAndInBox) {
  const auto p = load_fixture("lcp-param.mpec");
  InnerTrace trace;
  const KktPoint z0 = default_start(p, vec({2}));
  const ResidualSpec spec{ResidualKind::KktComposite, Norm::L2, 0.5, StationarityForm::Norm};
  inner_minimize(p, 10.0, spec, z0, 2000, 1e-10, &trace);
  ASSERT_GE(trace.values.size(), 2u);
  EXPECT_TRUE(trace.stayed_in_box);
  for (std::size_t k = 1; k < trace.values.size(); ++k) {
    EXPECT_LE(trace.values[k], trace.values[k - 1]);
  }
}

TEST(DefaultStart, MultipliersMatchPositiveSlack) {
  const auto p = load_fixture("lcp-param.mpec");
  const KktPoint z = default_start(p, vec({0.5}));
  EXPECT_EQ(z.y, vec({0, 0}));
  EXPECT_EQ(z.lambda, vec({0, 0.5}));
  EXPECT_EQ(default_start(p).x, vec({1}));
  EXPECT_THROW(default_start(p, vec({1, 2})), DimensionMismatch);
}

TEST(PenaltyContinuation, ParametricMpecIsSolvedFeasibly) {
  const auto p = load_fixture("lcp-param.mpec");
  const SolveReport r = penalty_continuation(p, PenaltyConfig{}, default_start(p, vec({2})));
  EXPECT_EQ(r.classification, Classification::FeasibleMinimizer);
  EXPECT_LE(r.final_residual, 1e-8);

  double best = 1e300;
  std::vector<Vector> xs;
  for (int k = 0; k <= 200; ++k) xs.push_back(vec({0.01 * k}));
  for (const auto& pt : parametric_solution_path(p.M(), p.param_map(), xs)) {
    best = std::min(best, p.objective().value(pt.x, pt.solutions.points[0]));
  }
  EXPECT_NEAR(r.final_objective, best, 1e-3);
  EXPECT_EQ(r.residual_history.size(), static_cast<std::size_t>(r.outer_iterations));
  EXPECT_EQ(r.alpha_history.front(), 1.0);
}

TEST(PenaltyContinuation, OrderOneEscapesOrigin) {
  const auto p = load_fixture("bilevel.mpec");
  PenaltyConfig c;
  c.residual = kProduct1;
  const SolveReport r = penalty_continuation(p, c, zero_point(p));
  ASSERT_FALSE(r.objective_history.empty());
  EXPECT_LT(r.objective_history.front(), 0.0);
}

TEST(PenaltyContinuation, ToyDetectsInfeasibleLocalMinimum) {
  const auto p = load_fixture("q5-toy.mpec");
  const SolveReport r = penalty_continuation(p, fixed(2.0, ResidualSpec{ResidualKind::KktComposite,
                                                                        Norm::L2, 0.5}),
                                             default_start(p, vec({3})));
  EXPECT_EQ(r.classification, Classification::InfeasiblePenaltyStationary);
  EXPECT_GT(r.final_residual, 0.5);
  EXPECT_NEAR(r.final_point.x[0], 3.0 - 1.0 / std::sqrt(3.0), 1e-6);
}

TEST(PenaltyContinuation, DeterministicReports) {
  const auto p = load_fixture("addq1.mpec");
  const SolveReport a = penalty_continuation(p, PenaltyConfig{});
  const SolveReport b = penalty_continuation(p, PenaltyConfig{});
  EXPECT_EQ(a.final_point, b.final_point);
  EXPECT_EQ(a.residual_history, b.residual_history);
  EXPECT_EQ(a.alpha_history, b.alpha_history);
}

TEST(CheckStationarity, SquareRootOriginIsStationary) {
  const auto p = load_fixture("bilevel.mpec");
  for (double alpha : {1.0, 2.0, 8.0}) {
    EXPECT_EQ(check_stationarity(p, zero_point(p), alpha, kProductHalf), 0.0);
  }
}

TEST(CheckStationarity, OrderOneOriginDescendsAtUnitRate) {
  const auto p = load_fixture("bilevel.mpec");
  for (double alpha : {1.0, 100.0}) {
    EXPECT_DOUBLE_EQ(check_stationarity(p, zero_point(p), alpha, kProduct1), 1.0);
  }
}

TEST(CheckStationarity, SmoothInteriorCriticalPoint) {
  auto f = QuadraticObjective::zero(1, 0);
  f.xx(0, 0) = 1;
  f.x_lin[0] = -2;
  f.constant = 1;
  const auto p = build_lcp_mpec(Matrix(0, 0), AffineParamMap(Matrix(0, 1), Vector(0)), f,
                                {{0, 2}}, 1.0);
  EXPECT_EQ(check_stationarity(p, KktPoint{vec({1}), Vector(0), Vector(0)}, 1.0, ResidualSpec{}),
            0.0);
  EXPECT_DOUBLE_EQ(
      check_stationarity(p, KktPoint{vec({0.5}), Vector(0), Vector(0)}, 1.0, ResidualSpec{}), 1.0);
}

TEST(ClassifyResult, Cases) {
  SolveReport r;
  r.final_residual = 1e-12;
  EXPECT_EQ(classify_result(r, 1e-8, 1e-6), Classification::FeasibleMinimizer);
  r.final_residual = 0.5;
  r.stationarity_measure = 0.0;
  EXPECT_EQ(classify_result(r, 1e-8, 1e-6), Classification::InfeasiblePenaltyStationary);
  r.stationarity_measure = 0.3;
  EXPECT_EQ(classify_result(r, 1e-8, 1e-6), Classification::IterationLimit);
}

TEST(ClassificationNames, AreStable) {
  EXPECT_EQ(to_string(Classification::FeasibleMinimizer), "FeasibleMinimizer");
  EXPECT_EQ(to_string(Classification::InfeasiblePenaltyStationary), "InfeasiblePenaltyStationary");
  EXPECT_EQ(to_string(Classification::IterationLimit), "IterationLimit");
}

TEST(MultiStart, DeterministicAndOrdered) {
  const auto p = load_fixture("bilevel.mpec");
  const PenaltyConfig c = fixed(2.0, kProductHalf);
  const auto a = multi_start(p, c, 6);
  const auto b = multi_start(p, c, 6);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].final_point, b[k].final_point);
    EXPECT_NEAR(a[k].final_penalized, 0.0, 1e-3);
  }
  EXPECT_LE(best_report(a).final_penalized, a.front().final_penalized);
  EXPECT_THROW(multi_start(p, c, 0), InvalidArgument);
}

TEST(ExactnessThreshold, ProductOfConstants) {
  EXPECT_DOUBLE_EQ(exactness_threshold(2.0, 1.5), 3.0);
  EXPECT_THROW(exactness_threshold(-1.0, 1.0), InvalidArgument);
}
