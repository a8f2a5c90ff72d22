// One line per acceptance criterion; exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mpecpen/errorbound_probe.hpp"
#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/penalty_solver.hpp"
#include "mpecpen/residuals.hpp"
#include "probes.hpp"
#include "support/test_support.hpp"

using namespace mpecpen;
using testing_support::load_fixture;
using testing_support::Rng;
using testing_support::vec;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

const std::vector<std::string> kFixtures{"lcp-param.mpec", "addq1.mpec", "bilevel.mpec",
                                         "q5-toy.mpec"};

Outcome ac1() {
  Outcome o;
  const RayReport r = cli::run_q1_ray(cli::q1_ray_parameters());
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.residual - std::sqrt(5.0)));
  o.require(r.rows.size() == 4 && worst <= 1e-12, "residual off sqrt(5) by " + fmt(worst));
  o.require(r.global_bound_refuted, "global bound not refuted");
  o.detail = o.passed ? "max |r - sqrt5| = " + fmt(worst) + ", GLOBAL-BOUND-REFUTED" : o.detail;
  return o;
}

Outcome ac2() {
  Outcome o;
  o.require(min_dirderiv(0, 0, 1, -2) == -2.0, "tie value is not -2");
  Rng rng(2);
  double worst_ratio = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double u = std::round(rng.uniform(-3, 3) * 4) / 4;
    const double v = rng.coin() ? u : std::round(rng.uniform(-3, 3) * 4) / 4;
    const double du = rng.uniform(-5, 5), dv = rng.uniform(-5, 5);
    const double d = min_dirderiv(u, v, du, dv);
    for (double t : {1e-3, 1e-4, 1e-5}) {
      const double secant = (std::min(u + t * du, v + t * dv) - std::min(u, v)) / t;
      worst_ratio = std::max(worst_ratio, std::abs(secant - d) / t);
    }
  }
  o.require(worst_ratio <= 10.0, "secant error / t reached " + fmt(worst_ratio));
  if (o.passed) o.detail = "tie = -2, max |secant - d| / t = " + fmt(worst_ratio);
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto p = load_fixture("bilevel.mpec");
  const KktPoint origin = testing_support::zero_point(p);
  const ResidualSpec order1{ResidualKind::Product, Norm::L2, 1.0};
  const ResidualSpec half{ResidualKind::Product, Norm::L2, 0.5};
  for (double a : {1.0, 10.0, 100.0, 1000.0}) {
    const KktPoint z = inner_minimize(p, a, order1, origin, 5000, 1e-10);
    const double phi = penalized_objective(p, z, a, order1);
    o.require(phi <= -1.0 / (8.0 * a), "gamma=1 alpha=" + fmt(a) + " reached only " + fmt(phi));
  }
  double worst = 0.0;
  for (double a : {1.0, 2.0, 4.0, 8.0}) {
    const double s = check_stationarity(p, origin, a, half);
    o.require(s == 0.0, "stationarity at origin " + fmt(s) + " for alpha=" + fmt(a));
    PenaltyConfig c;
    c.alpha0 = a;
    c.alpha_fixed = true;
    c.residual = half;
    for (const auto& r : multi_start(p, c, 20)) {
      worst = std::max(worst, std::abs(r.final_penalized));
    }
  }
  o.require(worst <= 1e-3, "multi-start worst |phi| = " + fmt(worst));
  if (o.passed) o.detail = "gamma=1 below -1/(8 alpha); gamma=1/2 worst |phi| = " + fmt(worst);
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto p = load_fixture("lcp-param.mpec");
  const std::vector<Vector> expected{vec({0, 0}), vec({0.5, 0}), vec({1, 1})};
  for (int k = 0; k < 3; ++k) {
    const SolutionSet s = solve_lcp_enumerate(p.lower_level_at(vec({double(k)})));
    o.require(s.size() == 1 && (s.points[0] - expected[k]).lpNorm<Eigen::Infinity>() <= 1e-10,
              "oracle set wrong at x=" + std::to_string(k));
  }
  double best = 1e300;
  for (int k = 0; k <= 200; ++k) {
    const Vector x = vec({0.01 * k});
    const SolutionSet s = solve_lcp_enumerate(p.lower_level_at(x));
    for (const auto& y : s.points) best = std::min(best, p.objective().value(x, y));
  }
  const SolveReport r = penalty_continuation(p, PenaltyConfig{}, default_start(p, vec({2})));
  const double gap = std::abs(r.final_objective - best);
  o.require(r.final_residual <= 1e-8, "continuation residual " + fmt(r.final_residual));
  o.require(gap <= 1e-3, "gap to grid optimum " + fmt(gap));
  if (o.passed) o.detail = "r = " + fmt(r.final_residual) + ", gap = " + fmt(gap);
  return o;
}

Outcome ac5() {
  Outcome o;
  const double lin = cli::run_fixture_probe("linear-halfspace", cli::kDefaultCloudSize, 0)
                         .estimate.gamma_hat;
  const double quad =
      cli::run_fixture_probe("quad-scalar", cli::kDefaultCloudSize, 0).estimate.gamma_hat;
  const double lcp =
      cli::run_fixture_probe("lcp-q2", cli::kDefaultCloudSize, 0).estimate.gamma_hat;
  o.require(std::abs(lin - 1.0) <= 1e-6, "linear gamma " + fmt(lin));
  o.require(std::abs(quad - 0.5) <= 1e-6, "quadratic gamma " + fmt(quad));
  o.require(lcp >= 0.9 && lcp <= 1.1, "lcp gamma " + fmt(lcp));
  if (o.passed) {
    o.detail = "gamma = " + fmt(lin) + " / " + fmt(quad) + " / " + fmt(lcp);
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  const auto half = cli::run_fixture_probe("hoffman-halfspace", cli::kDefaultCloudSize, 0);
  o.require(std::abs(half.estimate.tau_max - 1.0) <= 1e-9,
            "half-space tau " + fmt(half.estimate.tau_max));
  double worst = 1.0;
  for (const auto& name : cli::probe_fixture_names()) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const auto r = cli::run_fixture_probe(name, cli::kDefaultCloudSize, seed);
      worst = std::min(worst, r.bound_coverage);
    }
  }
  o.require(worst == 1.0, "bound coverage dropped to " + fmt(worst));
  if (o.passed) o.detail = "tau = " + fmt(half.estimate.tau_max) + ", coverage 100%";
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto p = load_fixture("q5-toy.mpec");
  PenaltyConfig c;
  c.alpha0 = 2.0;
  c.alpha_fixed = true;
  const SolveReport a = penalty_continuation(p, c, default_start(p, vec({3})));
  const SolveReport b = penalty_continuation(p, c, default_start(p, vec({0.1})));
  o.require(a.classification == Classification::InfeasiblePenaltyStationary,
            "from 3: " + std::string(to_string(a.classification)));
  o.require(a.final_residual > 0.5, "from 3: residual " + fmt(a.final_residual));
  o.require(b.classification == Classification::FeasibleMinimizer,
            "from 0.1: " + std::string(to_string(b.classification)));
  o.require(std::abs(b.final_point.x[0]) <= 1e-6, "from 0.1: t = " + fmt(b.final_point.x[0]));
  if (o.passed) {
    o.detail = "t0=3 -> t = " + fmt(a.final_point.x[0]) + ", r = " + fmt(a.final_residual) +
               "; t0=0.1 -> t = " + fmt(b.final_point.x[0]);
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  Rng rng(8);
  const ResidualSpec sq{ResidualKind::KktComposite, Norm::L2, 0.5, StationarityForm::Squared};
  double worst = 0.0;
  for (const auto& name : kFixtures) {
    const auto p = load_fixture(name);
    int checked = 0;
    while (checked < 100) {
      const KktPoint z = testing_support::random_point(rng, p);
      if (penalty_residual(p, z, sq) <= 1e-3) continue;
      const double alpha = rng.uniform(0.5, 5);
      const Vector g = grad_penalized_sqrt(p, z, alpha);
      const Vector s = z.stacked();
      Vector fd(s.size());
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        Vector up = s, dn = s;
        up[i] += 1e-6;
        dn[i] -= 1e-6;
        fd[i] = (penalized_objective(p, KktPoint::unstack(up, p.n(), p.m()), alpha, sq) -
                 penalized_objective(p, KktPoint::unstack(dn, p.n(), p.m()), alpha, sq)) /
                2e-6;
      }
      const double rel = (g - fd).lpNorm<Eigen::Infinity>() /
                         std::max(1.0, fd.lpNorm<Eigen::Infinity>());
      worst = std::max(worst, rel);
      ++checked;
    }
  }
  o.require(worst <= 1e-5, "worst relative gradient error " + fmt(worst));
  if (o.passed) o.detail = "worst relative error " + fmt(worst);
  return o;
}

bool constraints_hold(const MpecProblem& p, const KktPoint& z, double tol) {
  const Vector F = eval_F(p, z.x, z.y);
  for (int i = 0; i < p.m(); ++i) {
    if (z.y[i] < -tol || z.lambda[i] < -tol) return false;
    if (std::abs(F[i] - z.lambda[i]) > tol) return false;
    if (std::abs(z.lambda[i] * z.y[i]) > tol) return false;
  }
  return explicit_residual(p, z.x) <= tol;
}

Outcome ac9() {
  Outcome o;
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = rng.integer(1, 6);
    const LcpInstance lcp(testing_support::random_p_matrix(rng, m), rng.vector(m, -3, 3));
    const SolutionSet s = solve_lcp_enumerate(lcp);
    o.require(s.size() == 1 && is_lcp_solution(lcp, s.points[0], 1e-10),
              "P-matrix instance " + std::to_string(trial) + " has " +
                  std::to_string(s.size()) + " solutions");
  }
  int mismatches = 0;
  int zeros = 0;
  const ResidualSpec spec{};
  for (const auto& name : kFixtures) {
    const auto p = load_fixture(name);
    for (int k = 0; k < 10000; ++k) {
      KktPoint z;
      if (k % 2 == 0) {
        z = testing_support::random_point(rng, p);
      } else {
        const Vector x = rng.in_box(p.x_box());
        if (p.m() > 0) {
          const Vector y = solve_lcp_enumerate(p.lower_level_at(x)).points.at(0);
          z = KktPoint{x, y, eval_F(p, x, y)};
        } else {
          z = KktPoint{x, Vector(0), Vector(0)};
        }
        if (k % 4 == 3) z.y += rng.vector(p.m(), -1e-3, 1e-3);
      }
      const bool zero = penalty_residual(p, z, spec) <= 1e-12;
      if (zero != constraints_hold(p, z, 1e-12)) ++mismatches;
      zeros += zero ? 1 : 0;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " zero-set mismatches");
  if (o.passed) {
    o.detail = "200 unique solutions; 0 mismatches (" + std::to_string(zeros) + " zeros)";
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  std::vector<std::string> runs;
  for (int k = 0; k < 2; ++k) {
    std::ostringstream out, err;
    const int code = cli::run({"reproduce", "all", "--fixtures", MPECPEN_FIXTURE_DIR}, out, err);
    o.require(code == 0, "reproduce all exited " + std::to_string(code));
    runs.push_back(out.str());
  }
  o.require(!runs[0].empty() && runs[0] == runs[1], "reports differ between runs");
  if (o.passed) o.detail = std::to_string(runs[0].size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 ray residual", ac1},          {"AC2 directional derivative", ac2},
      {"AC3 square-root necessity", ac3}, {"AC4 parametric LCP", ac4},
      {"AC5 exponent recovery", ac5},     {"AC6 Hoffman baseline", ac6},
      {"AC7 infeasible local min", ac7},  {"AC8 gradient check", ac8},
      {"AC9 oracle properties", ac9},     {"AC10 determinism", ac10},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
    failures += o.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
