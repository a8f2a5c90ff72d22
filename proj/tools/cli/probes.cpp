#include "probes.hpp"

#include <cmath>

#include "mpecpen/errors.hpp"

namespace mpecpen::cli {
namespace {

double coverage(const std::vector<ProbeRow>& rows, const ErrorBoundEstimate& e) {
  if (rows.empty()) return 1.0;
  std::size_t ok = 0;
  for (const auto& row : rows) {
    const double bound =
        row.residual > 0.0
            ? (1.0 + 1e-6) * e.tau_max * std::pow(row.residual, e.gamma_hat)
            : 0.0;
    if (row.distance <= bound || (row.residual <= kResidualFloor && row.distance <= kResidualFloor)) {
      ++ok;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}

ProbeResult fitted(std::string name, std::vector<DistanceResidualSample> samples) {
  ProbeResult out;
  out.name = std::move(name);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.rows.push_back({static_cast<double>(i), samples[i].r, samples[i].dist});
  }
  out.estimate = fit_exponent(samples);
  out.bound_coverage = coverage(out.rows, out.estimate);
  return out;
}

ProbeResult hoffman(std::string name, const Polyhedron& P, Norm norm,
                    const std::vector<Vector>& cloud) {
  ProbeResult out;
  out.name = std::move(name);
  out.hoffman = true;
  out.estimate = hoffman_baseline(P, cloud, norm);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double r = polyhedron_residual(P, cloud[i], norm);
    const double d = (project_onto_polyhedron(P, cloud[i]) - cloud[i]).norm();
    out.rows.push_back({static_cast<double>(i), r, d});
  }
  out.bound_coverage = coverage(out.rows, out.estimate);
  return out;
}

Matrix row(double a, double b) {
  Matrix m(1, 2);
  m << a, b;
  return m;
}

}  // namespace

const std::vector<std::string>& probe_fixture_names() {
  static const std::vector<std::string> names{
      "linear-halfspace", "quad-scalar", "lcp-q2", "hoffman-halfspace",
      "hoffman-mixed"};
  return names;
}

ProbeResult run_fixture_probe(const std::string& name, int count,
                              std::uint64_t seed) {
  const Box square{{-1.0, 1.0}, {-1.0, 1.0}};
  if (name == "linear-halfspace") {
    // {x : x1 = 0} with residual |x1|.
    const Polyhedron P{Matrix(0, 2), Vector(0), row(1.0, 0.0), Vector::Zero(1)};
    std::vector<DistanceResidualSample> samples;
    for (const auto& x : sample_cloud(square, count, seed)) {
      samples.push_back({(project_onto_polyhedron(P, x) - x).norm(),
                         polyhedron_residual(P, x)});
    }
    return fitted(name, std::move(samples));
  }
  if (name == "quad-scalar") {
    // {x : x^2 <= 0} with residual [x^2]_+; the set is {0}.
    std::vector<DistanceResidualSample> samples;
    for (const auto& x : sample_cloud(Box{{-1.0, 1.0}}, count, seed)) {
      samples.push_back({std::abs(x[0]), std::max(x[0] * x[0], 0.0)});
    }
    return fitted(name, std::move(samples));
  }
  if (name == "lcp-q2") {
    Matrix M(2, 2);
    M << 2, 0, 0, 1;
    Vector q(2);
    q << -1, 0;
    const auto cloud = sample_cloud(Box{{-1.0, 2.0}, {-1.0, 2.0}}, count, seed);
    return fitted(name, lcp_error_samples(LcpInstance(M, q), cloud));
  }
  if (name == "hoffman-halfspace") {
    const Polyhedron P{row(1.0, 0.0), Vector::Zero(1), Matrix(0, 2), Vector(0)};
    return hoffman(name, P, Norm::L2, sample_cloud(square, count, seed));
  }
  if (name == "hoffman-mixed") {
    const Polyhedron P{row(1.0, 0.0), Vector::Zero(1), row(0.0, 1.0),
                       Vector::Zero(1)};
    return hoffman(name, P, Norm::L1, sample_cloud(square, count, seed));
  }
  throw InvalidArgument("unknown probe fixture '" + name + "'");
}

LcpInstance q1_lcp() {
  Matrix M(2, 2);
  M << 0, -1, 1, 0;
  Vector q(2);
  q << -1, 2;
  return LcpInstance(M, q);
}

SolutionSet q1_nominal_solutions() {
  SolutionSet s;
  s.points.push_back((Vector(2) << 1, 1).finished());
  s.points.push_back((Vector(2) << 0, 2).finished());
  return s;
}

std::vector<double> q1_ray_parameters() { return {1.0, 10.0, 100.0, 1e4}; }

RayReport run_q1_ray(const std::vector<double>& t_values) {
  const Vector base = (Vector(2) << 0, 1).finished();
  const Vector dir = (Vector(2) << 1, 0).finished();
  return ray_divergence_test(q1_lcp(), base, dir, t_values,
                             q1_nominal_solutions());
}

}  // namespace mpecpen::cli
