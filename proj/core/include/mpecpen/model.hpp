#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace mpecpen {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

using Box = std::vector<Interval>;

/// Throws UnboundedBox on infinite bounds and InvalidArgument on lo > hi.
void validate_box(const Box& box, const std::string& what);
bool box_contains(const Box& box, const Vector& v, double slack = 0.0);
Vector project_to_box(const Box& box, const Vector& v);

/// The pair (M, q) of the problem 0 <= y _|_ M y + q >= 0.
class LcpInstance {
 public:
  LcpInstance(Matrix M, Vector q);

  const Matrix& M() const { return M_; }
  const Vector& q() const { return q_; }
  int order() const { return static_cast<int>(q_.size()); }

  /// w = M y + q
  Vector slack(const Vector& y) const;

 private:
  Matrix M_;
  Vector q_;
};

/// q(x) = Q x + q0
class AffineParamMap {
 public:
  AffineParamMap(Matrix Q, Vector q0);

  const Matrix& Q() const { return Q_; }
  const Vector& q0() const { return q0_; }
  int rows() const { return static_cast<int>(q0_.size()); }
  int cols() const { return static_cast<int>(Q_.cols()); }

  Vector operator()(const Vector& x) const;

 private:
  Matrix Q_;
  Vector q0_;
};

/// f(x, y) = x'Axx x + x'Axy y + y'Ayy y + bx'x + by'y + c.
/// The quadratic blocks carry no factor 1/2.
struct QuadraticObjective {
  Matrix xx;
  Matrix xy;
  Matrix yy;
  Vector x_lin;
  Vector y_lin;
  double constant = 0.0;

  /// All-zero objective of the given dimensions.
  static QuadraticObjective zero(int n, int m);

  double value(const Vector& x, const Vector& y) const;
  Vector grad_x(const Vector& x, const Vector& y) const;
  Vector grad_y(const Vector& x, const Vector& y) const;
};

/// One quadratic piece p(x) = x'A x + b'x + c of an explicit residual.
struct QuadraticPiece {
  Matrix xx;
  Vector x_lin;
  double constant = 0.0;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

/// Candidate (x, y, lambda) of the one-level reformulation.
struct KktPoint {
  Vector x;
  Vector y;
  Vector lambda;

  int n() const { return static_cast<int>(x.size()); }
  int m() const { return static_cast<int>(y.size()); }

  /// Concatenation (x, y, lambda).
  Vector stacked() const;
  static KktPoint unstack(const Vector& z, int n, int m);

  bool operator==(const KktPoint& other) const;
};

/// An MPEC whose lower level is the parametric LCP
///   0 <= y _|_ M y + Q x + q0 >= 0,
/// reformulated on (x, y, lambda) with lambda in [0, c]^m.
/// Immutable once built; construct through build_lcp_mpec().
class MpecProblem {
 public:
  int n() const { return n_; }
  int m() const { return m_; }
  int dimension() const { return n_ + 2 * m_; }

  const Matrix& M() const { return M_; }
  const AffineParamMap& param_map() const { return qmap_; }
  const QuadraticObjective& objective() const { return f_; }
  const Box& x_box() const { return x_box_; }
  const Box& y_box() const { return y_box_; }
  double multiplier_bound() const { return c_; }
  const std::vector<QuadraticPiece>& residual_pieces() const {
    return pieces_;
  }
  const std::string& description() const { return description_; }

  /// The lower-level LCP with the parameter frozen at x.
  LcpInstance lower_level_at(const Vector& x) const;

  /// x_box x y_box x [0, c]^m, in stacked (x, y, lambda) order.
  const Box& variable_box() const { return z_box_; }

 private:
  friend MpecProblem build_lcp_mpec(Matrix, AffineParamMap,
                                    QuadraticObjective, Box, double, Box,
                                    std::vector<QuadraticPiece>, std::string);
  MpecProblem(Matrix M, AffineParamMap qmap, QuadraticObjective f, Box x_box,
              Box y_box, double c, std::vector<QuadraticPiece> pieces,
              std::string description);

  int n_;
  int m_;
  Matrix M_;
  AffineParamMap qmap_;
  QuadraticObjective f_;
  Box x_box_;
  Box y_box_;
  double c_;
  std::vector<QuadraticPiece> pieces_;
  std::string description_;
  Box z_box_;
};

/// Validates and assembles a problem. An empty y_box defaults to [0, c]^m.
///
/// Throws DimensionMismatch when the blocks disagree in size, UnboundedBox
/// when a bound is infinite, InvalidArgument when c <= 0 or a box interval
/// is empty.
MpecProblem build_lcp_mpec(Matrix M, AffineParamMap qmap, QuadraticObjective f,
                           Box x_box, double multiplier_bound, Box y_box = {},
                           std::vector<QuadraticPiece> residual_pieces = {},
                           std::string description = {});

/// Throws DimensionMismatch unless z has the problem's (n, m).
void check_dimensions(const MpecProblem& problem, const KktPoint& z);

/// F(x, y) = M y + q(x)
Vector eval_F(const MpecProblem& problem, const Vector& x, const Vector& y);

/// Explicit residual [min_k p_k(x)]_+, zero when the problem has no pieces.
double explicit_residual(const MpecProblem& problem, const Vector& x);

}  // namespace mpecpen
