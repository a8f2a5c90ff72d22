#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/model.hpp"
#include "mpecpen/residuals.hpp"

namespace mpecpen {

/// Samples with a residual at or below this are left out of fits.
inline constexpr double kResidualFloor = 1e-10;

struct DistanceResidualSample {
  double dist = 0.0;
  double r = 0.0;
};

/// Fit of dist <= tau * r^gamma over a sample cloud.
struct ErrorBoundEstimate {
  double gamma_hat = 0.0;
  /// exp(intercept) of the log-log regression.
  double tau_hat = 0.0;
  /// max dist / r^gamma_hat over the fitted samples; the worst-case constant.
  double tau_max = 0.0;
  std::size_t sample_count = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  double fit_rms = 0.0;
  /// No usable sample, e.g. a cloud inside the set.
  bool degenerate = false;
};

/// count points uniform in box, deterministic per seed.
std::vector<Vector> sample_cloud(const Box& box, int count, std::uint64_t seed);

/// Least squares on log dist = log tau + gamma log r over the samples with
/// r > kResidualFloor and dist > 0. Throws TooFewSamples below 10 of them.
ErrorBoundEstimate fit_exponent(std::span<const DistanceResidualSample> samples);

/// (distance to the enumerated solution set, min residual) at every point.
/// Throws EmptySolutionSet when the LCP has no solution.
std::vector<DistanceResidualSample> lcp_error_samples(
    const LcpInstance& lcp, std::span<const Vector> cloud, Norm norm = Norm::L2);

struct RayRow {
  double t = 0.0;
  double residual = 0.0;
  /// +infinity when the solution set is empty.
  double distance = 0.0;
};

struct RayReport {
  std::vector<RayRow> rows;
  bool global_bound_refuted = false;
  bool solution_set_empty = false;
  /// max / min residual over the rows.
  double residual_band = 0.0;
  /// last / first distance.
  double distance_growth = 0.0;
  std::string note;
};

/// Min residual and distance along base + t * direction. The distance is
/// measured against nominal when given, otherwise against the enumerated
/// solution set. Flags a refuted global bound when the residual is positive
/// and stays within a factor 10 while the distance grows by at least 100.
/// Throws InvalidArgument unless t_values is nonempty and increasing.
RayReport ray_divergence_test(const LcpInstance& lcp, const Vector& base,
                              const Vector& direction,
                              std::span<const double> t_values,
                              const std::optional<SolutionSet>& nominal = {},
                              Norm norm = Norm::L2);

/// {z : A z <= a, B z = b}. Either block may have zero rows.
struct Polyhedron {
  Matrix A;
  Vector a;
  Matrix B;
  Vector b;

  Eigen::Index dimension() const;
  /// Throws DimensionMismatch on inconsistent shapes.
  void validate() const;
};

/// Euclidean projection by enumerating the faces {A_S z = a_S, B z = b}
/// (at most 20 inequality rows). Throws EmptyPolyhedron or TooLarge.
Vector project_onto_polyhedron(const Polyhedron& P, const Vector& z);

/// ||[A z - a]_+|| + ||B z - b||.
double polyhedron_residual(const Polyhedron& P, const Vector& z,
                           Norm norm = Norm::L2);

/// gamma fixed at 1 and tau = max dist / r over the cloud. A cloud with no
/// positive residual gives tau = 0 and degenerate = true. Throws
/// EmptyPolyhedron.
ErrorBoundEstimate hoffman_baseline(const Polyhedron& P,
                                    std::span<const Vector> cloud,
                                    Norm norm = Norm::L2);

}  // namespace mpecpen
