#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mpecpen/model.hpp"

namespace mpecpen {

/// Largest LCP order the exhaustive routines accept (2^m index sets).
inline constexpr int kMaxEnumerationOrder = 20;
inline constexpr double kFeasibilityTolerance = 1e-10;
inline constexpr double kDedupTolerance = 1e-9;

/// Distinct isolated solutions of an LCP found by basis enumeration.
struct SolutionSet {
  std::vector<Vector> points;
  std::size_t bases_explored = 0;
  /// Index sets whose principal submatrix was singular; such bases are
  /// skipped, so a solution continuum would show up only here.
  std::size_t singular_bases = 0;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

/// y >= -tol, My + q >= -tol and |y'(My + q)| <= tol.
bool is_lcp_solution(const LcpInstance& lcp, const Vector& y,
                     double tol = kFeasibilityTolerance);

/// Every index set I is tried: M_II y_I = -q_I with y_{I^c} = 0. Output
/// order follows the index-set bitmask and is independent of how the work
/// is split across threads. Throws TooLarge when the order exceeds 20.
SolutionSet solve_lcp_enumerate(const LcpInstance& lcp);

/// Euclidean distance to the nearest listed solution. Throws
/// EmptySolutionSet when there is none.
double distance_to_solution_set(const Vector& z, const SolutionSet& sols);

struct PathPoint {
  Vector x;
  SolutionSet solutions;
};

std::vector<PathPoint> parametric_solution_path(
    const Matrix& M, const AffineParamMap& qmap,
    std::span<const Vector> x_grid);

/// True iff every principal minor is positive. Throws TooLarge above order 20.
bool is_P_matrix(const Matrix& M);

/// max over grid pairs of ||y(x1) - y(x2)|| / ||x1 - x2||; 0 for fewer than
/// two points. Throws NonUniqueSolution unless every set is a singleton.
double estimate_lipschitz_modulus(std::span<const PathPoint> path);

/// A constant c with max_i d_i (M d)_i >= c ||d||^2 for all d, i.e. a
/// uniform-P modulus of the map y -> M y. Exact for a positive diagonal M;
/// otherwise lambda_min(sym M) / m. Returns 0 when no bound is available.
double uniform_p_modulus(const Matrix& M);

/// ||Q||_2 / uniform_p_modulus(M): a Lipschitz bound for x -> y(x).
/// Infinite when the modulus is 0.
double solution_map_lipschitz_bound(const Matrix& M, const Matrix& Q);

}  // namespace mpecpen
