#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mpecpen/model.hpp"
#include "mpecpen/residuals.hpp"

namespace mpecpen {

/// Settings for the outer continuation loop and its inner solves. The
/// penalty exponent lives in residual.gamma.
struct PenaltyConfig {
  double alpha0 = 1.0;
  double growth = 10.0;
  double eps_feas = 1e-8;
  double eps_stat = 1e-6;
  int max_outer = 12;
  int max_inner = 5000;
  ResidualSpec residual{ResidualKind::KktComposite, Norm::L2, 0.5,
                        StationarityForm::Norm};
  std::uint64_t seed = 0;
  /// Keep alpha at alpha0 for every round.
  bool alpha_fixed = false;
  /// A round counts as progress when r drops below this factor times the
  /// previous round's r.
  double residual_decrease = 0.5;
  double inner_tol = 1e-10;
  double kink_tolerance = kKinkTolerance;

  /// Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

enum class Classification {
  FeasibleMinimizer,
  InfeasiblePenaltyStationary,
  IterationLimit,
};

std::string_view to_string(Classification c);

struct SolveReport {
  KktPoint final_point;
  std::vector<double> alpha_history;
  std::vector<double> residual_history;
  std::vector<double> objective_history;
  std::vector<double> penalized_history;
  Classification classification = Classification::IterationLimit;
  double stationarity_measure = 0.0;
  double final_residual = 0.0;
  double final_objective = 0.0;
  double final_penalized = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  ResidualSpec residual;
};

/// Optional record of an inner solve.
struct InnerTrace {
  /// Penalized objective after each accepted move, starting with z0.
  std::vector<double> values;
  bool stayed_in_box = true;
  int polls = 0;
  int gradient_steps = 0;
};

/// Projected compass search on f + alpha r^gamma over the variable box,
/// followed by projected-gradient steps when gamma = 1/2 and the residual is
/// away from its kink. Coordinate directions are polled first, then the
/// tangent directions of the current complementarity piece; the first strict
/// improvement is taken and the step halves after a failed poll. budget
/// bounds the number of polls. Throws InvalidArgument when z0 is outside the
/// box.
KktPoint inner_minimize(const MpecProblem& problem, double alpha,
                        const ResidualSpec& spec, const KktPoint& z0,
                        int budget, double tol, InnerTrace* trace = nullptr,
                        double kink_tolerance = kKinkTolerance);

/// x0 (box midpoint when empty) projected onto the box, y = 0 projected,
/// lambda = max(F(x, y), 0) projected.
KktPoint default_start(const MpecProblem& problem, const Vector& x0 = {});

/// Most negative one-sided derivative of the penalized objective over the
/// signed coordinate directions that stay in the box, negated and clamped at
/// 0.
double check_stationarity(const MpecProblem& problem, const KktPoint& z,
                          double alpha, const ResidualSpec& spec);

Classification classify_result(const SolveReport& report, double eps_feas,
                               double eps_stat);

SolveReport penalty_continuation(const MpecProblem& problem,
                                 const PenaltyConfig& config,
                                 std::optional<KktPoint> start = std::nullopt);

/// count solves from starts drawn uniformly from the x and y boxes (seeded
/// by config.seed), lambda initialized as in default_start. Solves run
/// concurrently; the result order follows the draw order.
std::vector<SolveReport> multi_start(const MpecProblem& problem,
                                     const PenaltyConfig& config, int count);

/// Lowest final penalized objective, earliest on ties.
const SolveReport& best_report(const std::vector<SolveReport>& reports);

/// alpha* = L * tau: above this the penalty is exact for an L-Lipschitz
/// objective and an error bound with constant tau.
double exactness_threshold(double lipschitz, double tau);

}  // namespace mpecpen
