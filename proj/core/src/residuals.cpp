#include "mpecpen/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }

void require_same_length(const Vector& y, const Vector& w) {
  if (y.size() != w.size()) {
    throw DimensionMismatch("y has length " + std::to_string(y.size()) +
                            " but w has length " + std::to_string(w.size()));
  }
}

double vector_norm(const Vector& v, Norm norm) {
  return norm == Norm::L1 ? v.lpNorm<1>() : v.norm();
}

double safe_product_residual(const Vector& y, const Vector& w) {
  double r = std::abs(y.dot(w));
  for (Eigen::Index i = 0; i < y.size(); ++i) r += pos(-y[i]) + pos(-w[i]);
  return r;
}

double lower_level_residual(const MpecProblem& problem, const KktPoint& z,
                            const ResidualSpec& spec) {
  if (problem.m() == 0) return 0.0;
  switch (spec.kind) {
    case ResidualKind::Min:
      return min_residual(z.y, eval_F(problem, z.x, z.y), spec.norm);
    case ResidualKind::Product:
      return safe_product_residual(z.y, eval_F(problem, z.x, z.y));
    case ResidualKind::KktComposite:
      return kkt_residual(problem, z, spec);
  }
  return 0.0;
}

// Truncated one-sided Taylor polynomial c0 + c1 t + c2 t^2 for t -> 0+.
struct Poly2 {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  Poly2 operator+(const Poly2& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Poly2 operator-() const { return {-c0, -c1, -c2}; }
};

// Sign of the function for small t > 0: first nonzero coefficient.
int leading_sign(const Poly2& p) {
  for (double c : {p.c0, p.c1, p.c2}) {
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
  }
  return 0;
}

Poly2 abs_of(const Poly2& p) { return leading_sign(p) < 0 ? -p : p; }
Poly2 pos_of(const Poly2& p) { return leading_sign(p) > 0 ? p : Poly2{}; }

Poly2 min_of(const Poly2& a, const Poly2& b) {
  if (a.c0 != b.c0) return a.c0 < b.c0 ? a : b;
  if (a.c1 != b.c1) {
    const double slope = min_dirderiv(a.c0, b.c0, a.c1, b.c1);
    return slope == a.c1 ? a : b;
  }
  return a.c2 <= b.c2 ? a : b;
}

// Product of two expansions, truncated at t^2.
Poly2 times(const Poly2& a, const Poly2& b) {
  return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0,
          a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0};
}


Poly2 l1_of(const std::vector<Poly2>& v) {
  Poly2 s;
  for (const auto& t : v) s = s + abs_of(t);
  return s;
}

Poly2 squared_l2_of(const std::vector<Poly2>& v) {
  Poly2 s;
  for (const auto& t : v) s = s + times(t, t);
  return s;
}

Poly2 l2_of(const std::vector<Poly2>& v) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (const auto& t : v) {
    s0 += t.c0 * t.c0;
    s1 += 2.0 * t.c0 * t.c1;
    s2 += t.c1 * t.c1 + 2.0 * t.c0 * t.c2;
    s3 += 2.0 * t.c1 * t.c2;
    s4 += t.c2 * t.c2;
  }
  if (s0 > 0.0) {
    const double r = std::sqrt(s0);
    return {r, s1 / (2.0 * r), s2 / (2.0 * r) - s1 * s1 / (8.0 * s0 * r)};
  }
  // Every component vanishes at t = 0, so s(t) = s2 t^2 + s3 t^3 + ...
  if (s2 > 0.0) {
    const double r = std::sqrt(s2);
    return {0.0, r, s3 / (2.0 * r)};
  }
  return {0.0, 0.0, std::sqrt(s4)};
}

Poly2 norm_of(const std::vector<Poly2>& v, Norm norm) {
  return norm == Norm::L1 ? l1_of(v) : l2_of(v);
}

std::vector<Poly2> affine_along(const Vector& v0, const Vector& v1) {
  std::vector<Poly2> out(static_cast<std::size_t>(v0.size()));
  for (Eigen::Index i = 0; i < v0.size(); ++i) {
    out[static_cast<std::size_t>(i)] = {v0[i], v1[i], 0.0};
  }
  return out;
}

Poly2 lower_level_along(const MpecProblem& problem, const KktPoint& z,
                        const KktPoint& dz, const ResidualSpec& spec) {
  if (problem.m() == 0) return {};
  const Vector F0 = eval_F(problem, z.x, z.y);
  const Vector F1 = problem.M() * dz.y + problem.param_map().Q() * dz.x;
  const auto y = affine_along(z.y, dz.y);
  const auto F = affine_along(F0, F1);
  const auto m = y.size();

  switch (spec.kind) {
    case ResidualKind::Min: {
      std::vector<Poly2> mins(m);
      for (std::size_t i = 0; i < m; ++i) mins[i] = min_of(y[i], F[i]);
      return norm_of(mins, spec.norm);
    }
    case ResidualKind::Product: {
      Poly2 r;
      Poly2 inner;
      for (std::size_t i = 0; i < m; ++i) {
        r = r + pos_of(-y[i]) + pos_of(-F[i]);
        inner = inner + times(y[i], F[i]);
      }
      return r + abs_of(inner);
    }
    case ResidualKind::KktComposite: {
      const auto lam = affine_along(z.lambda, dz.lambda);
      const auto v = affine_along(F0 - z.lambda, F1 - dz.lambda);
      Poly2 r;
      if (spec.stationarity == StationarityForm::Norm) {
        r = norm_of(v, spec.norm);
      } else if (spec.norm == Norm::L2) {
        r = squared_l2_of(v);
      } else {
        const Poly2 l1 = l1_of(v);
        r = times(l1, l1);
      }
      for (std::size_t i = 0; i < m; ++i) {
        r = r + pos_of(-y[i]) + pos_of(-lam[i]) + abs_of(times(lam[i], y[i]));
      }
      return r;
    }
  }
  return {};
}

Poly2 explicit_along(const MpecProblem& problem, const Vector& x,
                     const Vector& dx) {
  const auto& pieces = problem.residual_pieces();
  if (pieces.empty()) return {};
  Poly2 best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (const auto& p : pieces) {
    const Poly2 along{p.value(x), p.gradient(x).dot(dx), dx.dot(p.xx * dx)};
    best = min_of(best, along);
  }
  return pos_of(best);
}

}  // namespace

void ResidualSpec::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("gamma must lie in (0, 1], got " +
                          std::to_string(gamma));
  }
}

std::string_view to_string(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::Min: return "min";
    case ResidualKind::Product: return "product";
    case ResidualKind::KktComposite: return "kkt";
  }
  return "?";
}

std::string_view to_string(Norm norm) { return norm == Norm::L1 ? "l1" : "l2"; }

std::string_view to_string(StationarityForm form) {
  return form == StationarityForm::Norm ? "norm" : "squared";
}

ResidualKind parse_residual_kind(std::string_view text) {
  if (text == "min") return ResidualKind::Min;
  if (text == "product") return ResidualKind::Product;
  if (text == "kkt") return ResidualKind::KktComposite;
  throw InvalidArgument("unknown residual kind '" + std::string(text) + "'");
}

Norm parse_norm(std::string_view text) {
  if (text == "l1") return Norm::L1;
  if (text == "l2") return Norm::L2;
  throw InvalidArgument("unknown norm '" + std::string(text) + "'");
}

StationarityForm parse_stationarity_form(std::string_view text) {
  if (text == "norm") return StationarityForm::Norm;
  if (text == "squared") return StationarityForm::Squared;
  throw InvalidArgument("unknown stationarity form '" + std::string(text) + "'");
}

double min_residual(const Vector& y, const Vector& w, Norm norm) {
  require_same_length(y, w);
  return vector_norm(y.cwiseMin(w), norm);
}

double product_residual(const Vector& y, const Vector& w) {
  require_same_length(y, w);
  return y.dot(w);
}

double kkt_residual(const MpecProblem& problem, const KktPoint& z,
                    const ResidualSpec& spec) {
  check_dimensions(problem, z);
  if (problem.m() == 0) return 0.0;
  const Vector v = eval_F(problem, z.x, z.y) - z.lambda;
  double r = vector_norm(v, spec.norm);
  if (spec.stationarity == StationarityForm::Squared) r *= r;
  for (int i = 0; i < problem.m(); ++i) {
    r += pos(-z.y[i]) + pos(-z.lambda[i]) + std::abs(z.lambda[i] * z.y[i]);
  }
  return r;
}

double penalty_residual(const MpecProblem& problem, const KktPoint& z,
                        const ResidualSpec& spec) {
  check_dimensions(problem, z);
  return lower_level_residual(problem, z, spec) +
         explicit_residual(problem, z.x);
}

double penalized_objective(const MpecProblem& problem, const KktPoint& z,
                           double alpha, const ResidualSpec& spec) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  const double f = problem.objective().value(z.x, z.y);
  if (alpha == 0.0) {
    check_dimensions(problem, z);
    return f;
  }
  const double r = penalty_residual(problem, z, spec);
  return f + alpha * (spec.gamma == 1.0 ? r : std::pow(r, spec.gamma));
}

double min_dirderiv(double u, double v, double du, double dv) {
  if (u < v) return du;
  if (u > v) return dv;
  return std::min(du, dv);
}

Vector grad_penalized_sqrt(const MpecProblem& problem, const KktPoint& z,
                           double alpha, double kink_tolerance) {
  check_dimensions(problem, z);
  const int n = problem.n();
  const int m = problem.m();
  const ResidualSpec squared{ResidualKind::KktComposite, Norm::L2, 0.5,
                             StationarityForm::Squared};
  const double r = penalty_residual(problem, z, squared);
  if (r <= kink_tolerance) {
    throw AtKink("residual " + std::to_string(r) +
                 " is at the kink of the square-root penalty");
  }

  Vector grad_r = Vector::Zero(n + 2 * m);
  if (m > 0) {
    const Vector v = eval_F(problem, z.x, z.y) - z.lambda;
    grad_r.head(n) += 2.0 * problem.param_map().Q().transpose() * v;
    grad_r.segment(n, m) += 2.0 * problem.M().transpose() * v;
    grad_r.tail(m) -= 2.0 * v;
    for (int i = 0; i < m; ++i) {
      if (z.y[i] < 0.0) grad_r[n + i] -= 1.0;
      if (z.lambda[i] < 0.0) grad_r[n + m + i] -= 1.0;
      const double prod = z.lambda[i] * z.y[i];
      const double s = prod > 0.0 ? 1.0 : (prod < 0.0 ? -1.0 : 0.0);
      grad_r[n + i] += s * z.lambda[i];
      grad_r[n + m + i] += s * z.y[i];
    }
  }
  const auto& pieces = problem.residual_pieces();
  if (!pieces.empty()) {
    auto active = pieces.begin();
    for (auto it = pieces.begin(); it != pieces.end(); ++it) {
      if (it->value(z.x) < active->value(z.x)) active = it;
    }
    if (active->value(z.x) > 0.0) grad_r.head(n) += active->gradient(z.x);
  }

  Vector grad = Vector::Zero(n + 2 * m);
  grad.head(n) = problem.objective().grad_x(z.x, z.y);
  grad.segment(n, m) = problem.objective().grad_y(z.x, z.y);
  grad += (alpha / (2.0 * std::sqrt(r))) * grad_r;
  return grad;
}

RayExpansion residual_along_ray(const MpecProblem& problem, const KktPoint& z,
                                const KktPoint& dz, const ResidualSpec& spec) {
  check_dimensions(problem, z);
  check_dimensions(problem, dz);
  const Poly2 r =
      lower_level_along(problem, z, dz, spec) + explicit_along(problem, z.x, dz.x);
  return {r.c0, r.c1, r.c2};
}

double penalized_dirderiv(const MpecProblem& problem, const KktPoint& z,
                          const KktPoint& dz, double alpha,
                          const ResidualSpec& spec) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  check_dimensions(problem, dz);
  const auto& f = problem.objective();
  const double f_slope =
      f.grad_x(z.x, z.y).dot(dz.x) + f.grad_y(z.x, z.y).dot(dz.y);
  if (alpha == 0.0) return f_slope;

  const RayExpansion r = residual_along_ray(problem, z, dz, spec);
  const double g = spec.gamma;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double pen_slope = 0.0;
  if (r.value > 0.0) {
    pen_slope = g * std::pow(r.value, g - 1.0) * r.slope;
  } else if (r.slope > 0.0) {
    pen_slope = g < 1.0 ? inf : r.slope;
  } else if (r.curvature > 0.0) {
    // r ~ c t^2, so r^g ~ c^g t^(2g).
    if (2.0 * g < 1.0) {
      pen_slope = inf;
    } else if (2.0 * g == 1.0) {
      pen_slope = std::sqrt(r.curvature);
    }
  }
  return f_slope + alpha * pen_slope;
}

}  // namespace mpecpen
