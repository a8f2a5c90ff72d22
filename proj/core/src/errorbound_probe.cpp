#include "mpecpen/errorbound_probe.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

constexpr int kMinFitSamples = 10;
constexpr double kFaceTolerance = 1e-9;

double unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double block_norm(const Vector& v, Norm norm) {
  if (v.size() == 0) return 0.0;
  return norm == Norm::L1 ? v.lpNorm<1>() : v.norm();
}

}  // namespace

std::vector<Vector> sample_cloud(const Box& box, int count, std::uint64_t seed) {
  validate_box(box, "cloud box");
  if (count < 1) throw InvalidArgument("cloud needs at least one point");
  std::mt19937_64 gen(seed);
  std::vector<Vector> cloud;
  cloud.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector p(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      p[static_cast<Eigen::Index>(i)] = box[i].lo + box[i].width() * unit(gen);
    }
    cloud.push_back(std::move(p));
  }
  return cloud;
}

ErrorBoundEstimate fit_exponent(std::span<const DistanceResidualSample> samples) {
  std::vector<double> lr;
  std::vector<double> ld;
  ErrorBoundEstimate est;
  est.r_min = std::numeric_limits<double>::infinity();
  est.r_max = 0.0;
  for (const auto& s : samples) {
    if (!(s.r > kResidualFloor) || !(s.dist > 0.0)) continue;
    if (!std::isfinite(s.r) || !std::isfinite(s.dist)) continue;
    lr.push_back(std::log(s.r));
    ld.push_back(std::log(s.dist));
    est.r_min = std::min(est.r_min, s.r);
    est.r_max = std::max(est.r_max, s.r);
  }
  const auto count = lr.size();
  if (count < static_cast<std::size_t>(kMinFitSamples)) {
    throw TooFewSamples("fit needs " + std::to_string(kMinFitSamples) +
                        " usable samples, got " + std::to_string(count));
  }
  const double n = static_cast<double>(count);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mx += lr[i];
    my += ld[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (lr[i] - mx) * (lr[i] - mx);
    sxy += (lr[i] - mx) * (ld[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw TooFewSamples("all usable samples share one residual value");
  }
  est.gamma_hat = sxy / sxx;
  const double intercept = my - est.gamma_hat * mx;
  est.tau_hat = std::exp(intercept);
  double sq = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double e = ld[i] - intercept - est.gamma_hat * lr[i];
    sq += e * e;
    worst = std::max(worst, ld[i] - est.gamma_hat * lr[i]);
  }
  est.fit_rms = std::sqrt(sq / n);
  est.tau_max = std::exp(worst);
  est.sample_count = count;
  return est;
}

std::vector<DistanceResidualSample> lcp_error_samples(
    const LcpInstance& lcp, std::span<const Vector> cloud, Norm norm) {
  const SolutionSet sols = solve_lcp_enumerate(lcp);
  if (sols.empty()) throw EmptySolutionSet("LCP has no solution");
  std::vector<DistanceResidualSample> out;
  out.reserve(cloud.size());
  for (const auto& y : cloud) {
    out.push_back({distance_to_solution_set(y, sols),
                   min_residual(y, lcp.slack(y), norm)});
  }
  return out;
}

RayReport ray_divergence_test(const LcpInstance& lcp, const Vector& base,
                              const Vector& direction,
                              std::span<const double> t_values,
                              const std::optional<SolutionSet>& nominal,
                              Norm norm) {
  if (t_values.empty()) throw InvalidArgument("t_values is empty");
  for (std::size_t i = 1; i < t_values.size(); ++i) {
    if (!(t_values[i] > t_values[i - 1])) {
      throw InvalidArgument("t_values must be increasing");
    }
  }
  if (base.size() != lcp.order() || direction.size() != lcp.order()) {
    throw DimensionMismatch("ray and LCP differ in dimension");
  }
  const SolutionSet sols = nominal ? *nominal : solve_lcp_enumerate(lcp);

  RayReport report;
  report.solution_set_empty = sols.empty();
  for (const double t : t_values) {
    const Vector y = base + t * direction;
    RayRow row{t, min_residual(y, lcp.slack(y), norm),
               std::numeric_limits<double>::infinity()};
    if (!sols.empty()) row.distance = distance_to_solution_set(y, sols);
    report.rows.push_back(row);
  }

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const auto& row : report.rows) {
    rmin = std::min(rmin, row.residual);
    rmax = std::max(rmax, row.residual);
  }
  report.residual_band = rmin > 0.0 ? rmax / rmin
                                    : std::numeric_limits<double>::infinity();
  const double first = report.rows.front().distance;
  const double last = report.rows.back().distance;

  if (report.solution_set_empty) {
    report.note =
        "solution set is empty; the distance diverges by construction";
    return report;
  }
  report.distance_growth =
      first > 0.0 ? last / first
                  : (last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  report.global_bound_refuted = rmin > 0.0 && report.residual_band <= 10.0 &&
                                last > 0.0 && last >= 100.0 * first;
  if (nominal) report.note = "distance measured against a supplied solution set";
  return report;
}

Eigen::Index Polyhedron::dimension() const {
  return std::max(A.cols(), B.cols());
}

void Polyhedron::validate() const {
  const auto d = dimension();
  if ((A.rows() > 0 && A.cols() != d) || (B.rows() > 0 && B.cols() != d)) {
    throw DimensionMismatch("A and B have different column counts");
  }
  if (A.rows() != a.size() || B.rows() != b.size()) {
    throw DimensionMismatch("polyhedron right-hand side has the wrong length");
  }
}

Vector project_onto_polyhedron(const Polyhedron& P, const Vector& z) {
  P.validate();
  const auto d = z.size();
  if (P.dimension() != 0 && P.dimension() != d) {
    throw DimensionMismatch("point and polyhedron differ in dimension");
  }
  const auto p = static_cast<int>(P.A.rows());
  if (p > kMaxEnumerationOrder) {
    throw TooLarge("face enumeration supports at most " +
                   std::to_string(kMaxEnumerationOrder) + " inequalities");
  }
  const auto q = P.B.rows();

  double best = std::numeric_limits<double>::infinity();
  Vector best_point;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < p; ++i) {
      if (mask & (1u << i)) rows.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(rows.size()) + q;
    Vector x = z;
    if (k > 0) {
      Matrix C(k, d);
      Vector rhs(k);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto e = static_cast<Eigen::Index>(r);
        C.row(e) = P.A.row(rows[r]);
        rhs[e] = P.a[rows[r]];
      }
      if (q > 0) {
        C.bottomRows(q) = P.B;
        rhs.tail(q) = P.b;
      }
      const Vector shift =
          Eigen::CompleteOrthogonalDecomposition<Matrix>(C).solve(C * z - rhs);
      x = z - shift;
      if ((C * x - rhs).lpNorm<Eigen::Infinity>() > kFaceTolerance) continue;
    }
    if (p > 0 && (P.A * x - P.a).maxCoeff() > kFaceTolerance) continue;
    const double dist = (x - z).norm();
    if (dist < best) {
      best = dist;
      best_point = x;
    }
  }
  if (!std::isfinite(best)) throw EmptyPolyhedron("polyhedron is empty");
  return best_point;
}

double polyhedron_residual(const Polyhedron& P, const Vector& z, Norm norm) {
  P.validate();
  double r = 0.0;
  if (P.A.rows() > 0) r += block_norm((P.A * z - P.a).cwiseMax(0.0), norm);
  if (P.B.rows() > 0) r += block_norm(P.B * z - P.b, norm);
  return r;
}

ErrorBoundEstimate hoffman_baseline(const Polyhedron& P,
                                    std::span<const Vector> cloud,
                                    Norm norm) {
  P.validate();
  project_onto_polyhedron(P, Vector::Zero(P.dimension()));

  ErrorBoundEstimate est;
  est.gamma_hat = 1.0;
  est.r_min = std::numeric_limits<double>::infinity();
  double sq = 0.0;
  std::vector<double> log_ratio;
  for (const auto& z : cloud) {
    const double r = polyhedron_residual(P, z, norm);
    if (!(r > kResidualFloor)) continue;
    const double dist = (project_onto_polyhedron(P, z) - z).norm();
    est.tau_max = std::max(est.tau_max, dist / r);
    est.r_min = std::min(est.r_min, r);
    est.r_max = std::max(est.r_max, r);
    ++est.sample_count;
    if (dist > 0.0) log_ratio.push_back(std::log(dist / r));
  }
  if (est.sample_count == 0) {
    est.degenerate = true;
    est.r_min = 0.0;
    return est;
  }
  est.tau_hat = est.tau_max;
  const double log_tau = std::log(est.tau_max);
  for (const double v : log_ratio) sq += (v - log_tau) * (v - log_tau);
  est.fit_rms =
      log_ratio.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(log_ratio.size()));
  return est;
}

}  // namespace mpecpen
