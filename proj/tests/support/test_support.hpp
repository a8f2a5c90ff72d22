#pragma once

#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mpecpen/model.hpp"
#include "mpecpen/problem_io.hpp"

#ifndef MPECPEN_FIXTURE_DIR
#define MPECPEN_FIXTURE_DIR "fixtures"
#endif

namespace testing_support {

using mpecpen::Matrix;
using mpecpen::Vector;

/// splitmix64: small, seedable, identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(double p = 0.5) { return unit() < p; }

  Vector vector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Matrix matrix(Eigen::Index r, Eigen::Index c, double lo, double hi) {
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) M(i, j) = uniform(lo, hi);
    }
    return M;
  }
  Vector in_box(const mpecpen::Box& box) {
    Vector v(static_cast<Eigen::Index>(box.size()));
    for (std::size_t i = 0; i < box.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = uniform(box[i].lo, box[i].hi);
    }
    return v;
  }

 private:
  std::uint64_t state_;
};

/// A'A + I: positive definite, hence a P-matrix.
inline Matrix random_p_matrix(Rng& rng, Eigen::Index m) {
  const Matrix A = rng.matrix(m, m, -1.0, 1.0);
  return A.transpose() * A + Matrix::Identity(m, m);
}

/// Murty's least-index principal pivoting. Finite for P-matrices; returns
/// nothing when the pivot limit is hit or a basis is singular.
inline std::optional<Vector> murty_lcp(const Matrix& M, const Vector& q,
                                       int max_pivots = 100000) {
  const Eigen::Index m = M.rows();
  std::vector<bool> basic(static_cast<std::size_t>(m), false);
  for (int it = 0; it < max_pivots; ++it) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basic[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    Vector y = Vector::Zero(m);
    if (!idx.empty()) {
      const auto k = static_cast<Eigen::Index>(idx.size());
      Matrix sub(k, k);
      Vector rhs(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        rhs[a] = -q[idx[a]];
        for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = M(idx[a], idx[b]);
      }
      Eigen::FullPivLU<Matrix> lu(sub);
      if (!lu.isInvertible()) return std::nullopt;
      const Vector s = lu.solve(rhs);
      for (Eigen::Index a = 0; a < k; ++a) y[idx[a]] = s[a];
    }
    const Vector w = M * y + q;
    Eigen::Index bad = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double v = basic[static_cast<std::size_t>(i)] ? y[i] : w[i];
      if (v < -1e-12) {
        bad = i;
        break;
      }
    }
    if (bad < 0) return y;
    basic[static_cast<std::size_t>(bad)] = !basic[static_cast<std::size_t>(bad)];
  }
  return std::nullopt;
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MPECPEN_FIXTURE_DIR) / name;
}

inline mpecpen::MpecProblem load_fixture(const std::string& name) {
  return mpecpen::parse_problem_file(fixture_path(name));
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out[i++] = x;
  return out;
}

inline mpecpen::KktPoint zero_point(const mpecpen::MpecProblem& p) {
  return {Vector::Zero(p.n()), Vector::Zero(p.m()), Vector::Zero(p.m())};
}

inline mpecpen::KktPoint random_point(Rng& rng, const mpecpen::MpecProblem& p) {
  return mpecpen::KktPoint::unstack(rng.in_box(p.variable_box()), p.n(), p.m());
}

}  // namespace testing_support
