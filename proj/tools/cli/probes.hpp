#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpecpen/errorbound_probe.hpp"

namespace mpecpen::cli {

inline constexpr int kDefaultCloudSize = 400;

/// One row of a probe table: sample id (or ray parameter), residual, distance.
struct ProbeRow {
  double key = 0.0;
  double residual = 0.0;
  double distance = 0.0;
};

struct ProbeResult {
  std::string name;
  std::vector<ProbeRow> rows;
  ErrorBoundEstimate estimate;
  /// Hoffman runs report the max-ratio constant only.
  bool hoffman = false;
  /// Fraction of rows with dist <= (1 + 1e-6) tau_max r^gamma_hat.
  double bound_coverage = 0.0;
};

/// Names accepted by run_fixture_probe().
const std::vector<std::string>& probe_fixture_names();

/// Throws InvalidArgument on an unknown name.
ProbeResult run_fixture_probe(const std::string& name, int count,
                              std::uint64_t seed);

/// The rotation LCP M = [[0,-1],[1,0]], q = (-1,2) along (t, 1), measured
/// against the solution set {(1,1), (0,2)}.
RayReport run_q1_ray(const std::vector<double>& t_values);

/// t = 1, 10, 100, 10^4.
std::vector<double> q1_ray_parameters();
LcpInstance q1_lcp();
SolutionSet q1_nominal_solutions();

}  // namespace mpecpen::cli
