#include "mpecpen/lcp_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>

#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

// Below this order the enumeration runs on the calling thread.
constexpr int kParallelThreshold = 12;

std::vector<int> members(std::uint32_t mask, int m) {
  std::vector<int> idx;
  for (int i = 0; i < m; ++i) {
    if (mask & (1u << i)) idx.push_back(i);
  }
  return idx;
}

struct Candidate {
  std::vector<Vector> points;
  std::size_t explored = 0;
  std::size_t singular = 0;
};

void enumerate_range(const LcpInstance& lcp, std::uint32_t begin,
                     std::uint32_t end, Candidate& out) {
  const int m = lcp.order();
  for (std::uint32_t mask = begin; mask < end; ++mask) {
    ++out.explored;
    const auto idx = members(mask, m);
    Vector y = Vector::Zero(m);
    if (!idx.empty()) {
      const auto k = static_cast<Eigen::Index>(idx.size());
      Matrix sub(k, k);
      Vector rhs(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        rhs[a] = -lcp.q()[idx[a]];
        for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = lcp.M()(idx[a], idx[b]);
      }
      Eigen::FullPivLU<Matrix> lu(sub);
      if (!lu.isInvertible()) {
        ++out.singular;
        continue;
      }
      const Vector sol = lu.solve(rhs);
      for (Eigen::Index a = 0; a < k; ++a) y[idx[a]] = sol[a];
    }
    if (is_lcp_solution(lcp, y)) out.points.push_back(std::move(y));
  }
}

void check_order(Eigen::Index m) {
  if (m > kMaxEnumerationOrder) {
    throw TooLarge("order " + std::to_string(m) + " exceeds the limit of " +
                   std::to_string(kMaxEnumerationOrder));
  }
}

}  // namespace

bool is_lcp_solution(const LcpInstance& lcp, const Vector& y, double tol) {
  const Vector w = lcp.slack(y);
  return y.minCoeff() >= -tol && w.minCoeff() >= -tol &&
         std::abs(y.dot(w)) <= tol;
}

SolutionSet solve_lcp_enumerate(const LcpInstance& lcp) {
  const int m = lcp.order();
  check_order(m);
  const std::uint32_t total = 1u << m;

  unsigned workers = 1;
  if (m >= kParallelThreshold) {
    workers = std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
  }
  std::vector<Candidate> parts(workers);
  {
    std::vector<std::jthread> threads;
    const std::uint32_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint32_t begin = std::min(total, w * chunk);
      const std::uint32_t end = std::min(total, begin + chunk);
      if (workers == 1) {
        enumerate_range(lcp, begin, end, parts[w]);
      } else {
        threads.emplace_back([&lcp, begin, end, &part = parts[w]] {
          enumerate_range(lcp, begin, end, part);
        });
      }
    }
  }

  SolutionSet out;
  for (auto& part : parts) {
    out.bases_explored += part.explored;
    out.singular_bases += part.singular;
    for (auto& y : part.points) {
      const bool seen = std::any_of(
          out.points.begin(), out.points.end(),
          [&](const Vector& p) { return (p - y).norm() <= kDedupTolerance; });
      if (!seen) out.points.push_back(std::move(y));
    }
  }
  return out;
}

double distance_to_solution_set(const Vector& z, const SolutionSet& sols) {
  if (sols.empty()) throw EmptySolutionSet("solution set is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : sols.points) {
    if (p.size() != z.size()) {
      throw DimensionMismatch("point and solutions differ in dimension");
    }
    best = std::min(best, (z - p).norm());
  }
  return best;
}

std::vector<PathPoint> parametric_solution_path(
    const Matrix& M, const AffineParamMap& qmap,
    std::span<const Vector> x_grid) {
  if (x_grid.empty()) throw InvalidArgument("parameter grid is empty");
  std::vector<PathPoint> path;
  path.reserve(x_grid.size());
  for (const auto& x : x_grid) {
    path.push_back({x, solve_lcp_enumerate(LcpInstance(M, qmap(x)))});
  }
  return path;
}

bool is_P_matrix(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("matrix is not square");
  const auto m = static_cast<int>(M.rows());
  check_order(m);
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const auto idx = members(mask, m);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = M(idx[a], idx[b]);
    }
    if (!(sub.fullPivLu().determinant() > 0.0)) return false;
  }
  return true;
}

double estimate_lipschitz_modulus(std::span<const PathPoint> path) {
  for (const auto& p : path) {
    if (p.solutions.size() != 1) {
      throw NonUniqueSolution("path point has " +
                              std::to_string(p.solutions.size()) +
                              " solutions");
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      const double dx = (path[i].x - path[j].x).norm();
      if (dx == 0.0) continue;
      const double dy =
          (path[i].solutions.points[0] - path[j].solutions.points[0]).norm();
      best = std::max(best, dy / dx);
    }
  }
  return best;
}

double uniform_p_modulus(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("matrix is not square");
  const auto m = M.rows();
  if (m == 0) return 0.0;
  const Matrix off = M - Matrix(M.diagonal().asDiagonal());
  if (off.isZero(0.0) && M.diagonal().minCoeff() > 0.0) {
    // max_i D_i d_i^2 over the unit sphere is smallest when all D_i d_i^2
    // agree, giving 1 / sum(1 / D_i).
    return 1.0 / M.diagonal().cwiseInverse().sum();
  }
  const Matrix sym = 0.5 * (M + M.transpose());
  const double lmin =
      Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
  return lmin > 0.0 ? lmin / static_cast<double>(m) : 0.0;
}

double solution_map_lipschitz_bound(const Matrix& M, const Matrix& Q) {
  const double c = uniform_p_modulus(M);
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  const double gamma_F =
      Q.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(Q).singularValues()[0];
  return gamma_F / c;
}

}  // namespace mpecpen
