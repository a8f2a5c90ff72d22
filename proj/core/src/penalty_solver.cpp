#include "mpecpen/penalty_solver.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

// |y_i - w_i| below this puts index i on both pieces.
constexpr double kTieTolerance = 1e-9;
constexpr int kMaxEnumeratedTies = 3;
constexpr double kArmijo = 1e-4;

double unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

class Landscape {
 public:
  Landscape(const MpecProblem& problem, double alpha, const ResidualSpec& spec)
      : problem_(problem), alpha_(alpha), spec_(spec),
        box_(problem.variable_box()) {}

  KktPoint point(const Vector& z) const {
    return KktPoint::unstack(z, problem_.n(), problem_.m());
  }
  double value(const Vector& z) const {
    return penalized_objective(problem_, point(z), alpha_, spec_);
  }
  const Box& box() const { return box_; }

  // Directions along which the current complementarity piece is kept:
  // x moves along e_k while y_I follows M_II dy_I = -Q_Ik, and lambda
  // tracks w = F(x, y).
  std::vector<Vector> tangents(const Vector& zs) const {
    const int n = problem_.n();
    const int m = problem_.m();
    std::vector<Vector> out;
    if (m == 0) return out;
    const KktPoint z = point(zs);
    const Vector w = eval_F(problem_, z.x, z.y);
    const Matrix& M = problem_.M();
    const Matrix& Q = problem_.param_map().Q();

    std::vector<int> base;
    std::vector<int> ties;
    for (int i = 0; i < m; ++i) {
      const double gap = z.y[i] - w[i];
      if (std::abs(gap) <= kTieTolerance) {
        ties.push_back(i);
      } else if (gap > 0.0) {
        base.push_back(i);
      }
    }
    const int tie_count =
        static_cast<int>(ties.size()) <= kMaxEnumeratedTies
            ? static_cast<int>(ties.size())
            : 0;

    for (unsigned mask = 0; mask < (1u << tie_count); ++mask) {
      std::vector<int> active = base;
      for (int t = 0; t < tie_count; ++t) {
        if (mask & (1u << t)) active.push_back(ties[t]);
      }
      std::sort(active.begin(), active.end());
      const auto k = static_cast<Eigen::Index>(active.size());
      Matrix sub(k, k);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = M(active[a], active[b]);
      }
      Eigen::FullPivLU<Matrix> lu;
      if (k > 0) {
        lu.compute(sub);
        if (!lu.isInvertible()) continue;
      }
      for (int c = 0; c < n; ++c) {
        Vector dx = Vector::Zero(n);
        dx[c] = 1.0;
        Vector dy = Vector::Zero(m);
        if (k > 0) {
          Vector rhs(k);
          for (Eigen::Index a = 0; a < k; ++a) rhs[a] = -Q(active[a], c);
          const Vector sol = lu.solve(rhs);
          for (Eigen::Index a = 0; a < k; ++a) dy[active[a]] = sol[a];
        }
        push(out, dx, dy, M * dy + Q * dx);
      }
    }
    if (spec_.kind == ResidualKind::KktComposite) {
      for (int j = 0; j < m; ++j) {
        Vector dy = Vector::Zero(m);
        dy[j] = 1.0;
        push(out, Vector::Zero(n), dy, M * dy);
      }
    }
    return out;
  }

 private:
  static void push(std::vector<Vector>& out, const Vector& dx, const Vector& dy,
                   const Vector& dl) {
    Vector d(dx.size() + dy.size() + dl.size());
    d << dx, dy, dl;
    const double scale = d.lpNorm<Eigen::Infinity>();
    if (!(scale > 0.0) || !std::isfinite(scale)) return;
    out.push_back(d / scale);
  }

  const MpecProblem& problem_;
  double alpha_;
  const ResidualSpec& spec_;
  Box box_;
};

double largest_width(const Box& box) {
  double w = 0.0;
  for (const auto& iv : box) w = std::max(w, iv.width());
  return w;
}

}  // namespace

void PenaltyConfig::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidArgument("alpha0 must be positive");
  }
  if (!(growth > 1.0) || !std::isfinite(growth)) {
    throw InvalidArgument("growth must exceed 1");
  }
  if (!(eps_feas > 0.0) || !(eps_stat > 0.0) || !(inner_tol > 0.0) ||
      !(kink_tolerance > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (max_outer < 1 || max_inner < 0) {
    throw InvalidArgument("iteration limits must be positive");
  }
  if (!(residual_decrease > 0.0 && residual_decrease < 1.0)) {
    throw InvalidArgument("residual_decrease must lie in (0, 1)");
  }
  residual.validate();
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::FeasibleMinimizer:
      return "FeasibleMinimizer";
    case Classification::InfeasiblePenaltyStationary:
      return "InfeasiblePenaltyStationary";
    case Classification::IterationLimit:
      return "IterationLimit";
  }
  return "IterationLimit";
}

KktPoint inner_minimize(const MpecProblem& problem, double alpha,
                        const ResidualSpec& spec, const KktPoint& z0,
                        int budget, double tol, InnerTrace* trace,
                        double kink_tolerance) {
  check_dimensions(problem, z0);
  const Landscape land(problem, alpha, spec);
  Vector z = z0.stacked();
  if (!box_contains(land.box(), z)) {
    throw InvalidArgument("start point lies outside the variable box");
  }
  double val = land.value(z);
  if (trace) trace->values.push_back(val);
  if (budget <= 0) return z0;

  const auto record = [&](const Vector& next, double v) {
    z = next;
    val = v;
    if (trace) {
      trace->values.push_back(v);
      if (!box_contains(land.box(), z)) trace->stayed_in_box = false;
    }
  };

  const Eigen::Index N = z.size();
  const double step0 = 0.1 * largest_width(land.box());
  double step = step0;
  int polls = 0;
  while (polls < budget && step >= tol) {
    ++polls;
    std::vector<Vector> dirs;
    dirs.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) dirs.push_back(Vector::Unit(N, i));
    for (auto& d : land.tangents(z)) dirs.push_back(std::move(d));

    bool moved = false;
    for (const auto& d : dirs) {
      for (const double sign : {1.0, -1.0}) {
        const Vector cand = project_to_box(land.box(), z + (sign * step) * d);
        if (cand == z) continue;
        const double v = land.value(cand);
        if (v < val) {
          record(cand, v);
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) step *= 0.5;
  }

  int gradient_steps = 0;
  if (spec.gamma == 0.5 && problem.m() > 0 && alpha > 0.0) {
    for (int k = 0; k < budget; ++k) {
      const KktPoint pt = land.point(z);
      if (penalty_residual(problem, pt, spec) <= kink_tolerance) break;
      Vector g;
      try {
        g = grad_penalized_sqrt(problem, pt, alpha, kink_tolerance);
      } catch (const AtKink&) {
        break;
      }
      const double gmax = g.lpNorm<Eigen::Infinity>();
      if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
      double t = std::max(step0, tol) / gmax;
      bool moved = false;
      for (int h = 0; h < 60 && !moved; ++h, t *= 0.5) {
        const Vector cand = project_to_box(land.box(), z - t * g);
        const double decrease = g.dot(z - cand);
        if (!(decrease > 0.0)) continue;
        const double v = land.value(cand);
        if (v < val && v <= val - kArmijo * decrease) {
          record(cand, v);
          moved = true;
        }
      }
      if (!moved) break;
      ++gradient_steps;
    }
  }

  if (trace) {
    trace->polls += polls;
    trace->gradient_steps += gradient_steps;
  }
  return land.point(z);
}

KktPoint default_start(const MpecProblem& problem, const Vector& x0) {
  const Box& xb = problem.x_box();
  Vector x(problem.n());
  if (x0.size() == 0) {
    for (int i = 0; i < problem.n(); ++i) x[i] = 0.5 * (xb[i].lo + xb[i].hi);
  } else {
    if (x0.size() != problem.n()) {
      throw DimensionMismatch("start x has length " + std::to_string(x0.size()) +
                              ", expected " + std::to_string(problem.n()));
    }
    x = project_to_box(xb, x0);
  }
  const Vector y = project_to_box(problem.y_box(), Vector::Zero(problem.m()));
  Vector lambda = eval_F(problem, x, y).cwiseMax(0.0);
  for (int i = 0; i < problem.m(); ++i) {
    lambda[i] = std::min(lambda[i], problem.multiplier_bound());
  }
  return KktPoint{x, y, lambda};
}

double check_stationarity(const MpecProblem& problem, const KktPoint& z,
                          double alpha, const ResidualSpec& spec) {
  check_dimensions(problem, z);
  const Box box = problem.variable_box();
  const Vector zs = z.stacked();
  const int n = problem.n();
  const int m = problem.m();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < zs.size(); ++i) {
    for (const double sign : {1.0, -1.0}) {
      const auto& iv = box[static_cast<std::size_t>(i)];
      if (sign > 0.0 && zs[i] >= iv.hi) continue;
      if (sign < 0.0 && zs[i] <= iv.lo) continue;
      const KktPoint dz =
          KktPoint::unstack(sign * Vector::Unit(zs.size(), i), n, m);
      const double d = penalized_dirderiv(problem, z, dz, alpha, spec);
      worst = std::min(worst, d);
    }
  }
  return worst < 0.0 ? -worst : 0.0;
}

Classification classify_result(const SolveReport& report, double eps_feas,
                               double eps_stat) {
  if (report.final_residual <= eps_feas) return Classification::FeasibleMinimizer;
  if (report.stationarity_measure <= eps_stat) {
    return Classification::InfeasiblePenaltyStationary;
  }
  return Classification::IterationLimit;
}

SolveReport penalty_continuation(const MpecProblem& problem,
                                 const PenaltyConfig& config,
                                 std::optional<KktPoint> start) {
  config.validate();
  const ResidualSpec& spec = config.residual;
  KktPoint z = start ? *start : default_start(problem);
  check_dimensions(problem, z);
  z = KktPoint::unstack(project_to_box(problem.variable_box(), z.stacked()),
                        problem.n(), problem.m());

  SolveReport report;
  report.residual = spec;
  double alpha = config.alpha0;
  double prev_r = std::numeric_limits<double>::infinity();
  bool decided = false;
  for (int round = 0; round < config.max_outer; ++round) {
    InnerTrace trace;
    z = inner_minimize(problem, alpha, spec, z, config.max_inner,
                       config.inner_tol, &trace, config.kink_tolerance);
    const double r = penalty_residual(problem, z, spec);
    const double f = problem.objective().value(z.x, z.y);
    report.alpha_history.push_back(alpha);
    report.residual_history.push_back(r);
    report.objective_history.push_back(f);
    report.penalized_history.push_back(penalized_objective(problem, z, alpha, spec));
    report.inner_iterations += trace.polls + trace.gradient_steps;
    report.outer_iterations = round + 1;
    report.stationarity_measure = check_stationarity(problem, z, alpha, spec);

    if (r <= config.eps_feas) {
      report.classification = Classification::FeasibleMinimizer;
      decided = true;
      break;
    }
    const bool stalled =
        config.alpha_fixed ||
        (round >= 1 && r > config.residual_decrease * prev_r);
    if (stalled && report.stationarity_measure <= config.eps_stat) {
      report.classification = Classification::InfeasiblePenaltyStationary;
      decided = true;
      break;
    }
    prev_r = r;
    if (!config.alpha_fixed) alpha *= config.growth;
  }

  report.final_point = z;
  report.final_residual = report.residual_history.back();
  report.final_objective = report.objective_history.back();
  report.final_penalized = report.penalized_history.back();
  if (!decided) {
    report.classification =
        classify_result(report, config.eps_feas, config.eps_stat);
    if (report.classification == Classification::InfeasiblePenaltyStationary) {
      report.classification = Classification::IterationLimit;
    }
  }
  return report;
}

std::vector<SolveReport> multi_start(const MpecProblem& problem,
                                     const PenaltyConfig& config, int count) {
  config.validate();
  if (count < 1) throw InvalidArgument("multi_start needs at least one start");
  std::mt19937_64 gen(config.seed);
  std::vector<KktPoint> starts;
  starts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector x(problem.n());
    for (int i = 0; i < problem.n(); ++i) {
      const auto& iv = problem.x_box()[i];
      x[i] = iv.lo + iv.width() * unit(gen);
    }
    Vector y(problem.m());
    for (int i = 0; i < problem.m(); ++i) {
      const auto& iv = problem.y_box()[i];
      y[i] = iv.lo + iv.width() * unit(gen);
    }
    Vector lambda = eval_F(problem, x, y)
                        .cwiseMax(0.0)
                        .cwiseMin(problem.multiplier_bound());
    starts.push_back(KktPoint{x, y, lambda});
  }

  std::vector<SolveReport> reports(starts.size());
  const unsigned workers = std::clamp(std::thread::hardware_concurrency(), 1u,
                                      static_cast<unsigned>(count));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < starts.size(); k += workers) {
          reports[k] = penalty_continuation(problem, config, starts[k]);
        }
      });
    }
  }
  return reports;
}

const SolveReport& best_report(const std::vector<SolveReport>& reports) {
  if (reports.empty()) throw InvalidArgument("no reports to choose from");
  const SolveReport* best = &reports.front();
  for (const auto& r : reports) {
    if (r.final_penalized < best->final_penalized) best = &r;
  }
  return *best;
}

double exactness_threshold(double lipschitz, double tau) {
  if (!(lipschitz >= 0.0) || !(tau >= 0.0)) {
    throw InvalidArgument("Lipschitz constant and tau must be nonnegative");
  }
  return lipschitz * tau;
}

}  // namespace mpecpen
