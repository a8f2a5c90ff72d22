#include "mpecpen/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

std::string shape(const Matrix& A) {
  std::ostringstream os;
  os << A.rows() << "x" << A.cols();
  return os.str();
}

void require_shape(const Matrix& A, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
  if (A.rows() != rows || A.cols() != cols) {
    std::ostringstream os;
    os << what << " is " << shape(A) << ", expected " << rows << "x" << cols;
    throw DimensionMismatch(os.str());
  }
}

void require_length(const Vector& v, Eigen::Index len,
                    const std::string& what) {
  if (v.size() != len) {
    std::ostringstream os;
    os << what << " has length " << v.size() << ", expected " << len;
    throw DimensionMismatch(os.str());
  }
}

void require_finite(const Matrix& A, const std::string& what) {
  if (!A.allFinite()) throw InvalidArgument(what + " has non-finite entries");
}

}  // namespace

void validate_box(const Box& box, const std::string& what) {
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto& iv = box[i];
    if (std::isnan(iv.lo) || std::isnan(iv.hi)) {
      throw InvalidArgument(what + "[" + std::to_string(i) + "] is NaN");
    }
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw UnboundedBox(what + "[" + std::to_string(i) + "] is unbounded");
    }
    if (iv.lo > iv.hi) {
      throw InvalidArgument(what + "[" + std::to_string(i) + "] is empty");
    }
  }
}

bool box_contains(const Box& box, const Vector& v, double slack) {
  if (static_cast<std::size_t>(v.size()) != box.size()) return false;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (v[i] < box[i].lo - slack || v[i] > box[i].hi + slack) return false;
  }
  return true;
}

Vector project_to_box(const Box& box, const Vector& v) {
  Vector out = v;
  for (std::size_t i = 0; i < box.size(); ++i) out[i] = box[i].clamp(v[i]);
  return out;
}

LcpInstance::LcpInstance(Matrix M, Vector q) : M_(std::move(M)), q_(std::move(q)) {
  if (M_.rows() != M_.cols()) {
    throw DimensionMismatch("LCP matrix is " + shape(M_) + ", not square");
  }
  require_length(q_, M_.rows(), "LCP vector q");
  require_finite(M_, "LCP matrix");
  require_finite(q_, "LCP vector q");
}

Vector LcpInstance::slack(const Vector& y) const {
  require_length(y, order(), "y");
  return M_ * y + q_;
}

AffineParamMap::AffineParamMap(Matrix Q, Vector q0)
    : Q_(std::move(Q)), q0_(std::move(q0)) {
  if (Q_.rows() != q0_.size()) {
    throw DimensionMismatch("parametric map Q has " +
                            std::to_string(Q_.rows()) + " rows but q0 has " +
                            std::to_string(q0_.size()) + " entries");
  }
  require_finite(Q_, "Q");
  require_finite(q0_, "q0");
}

Vector AffineParamMap::operator()(const Vector& x) const {
  require_length(x, cols(), "x");
  return Q_ * x + q0_;
}

QuadraticObjective QuadraticObjective::zero(int n, int m) {
  QuadraticObjective f;
  f.xx = Matrix::Zero(n, n);
  f.xy = Matrix::Zero(n, m);
  f.yy = Matrix::Zero(m, m);
  f.x_lin = Vector::Zero(n);
  f.y_lin = Vector::Zero(m);
  return f;
}

double QuadraticObjective::value(const Vector& x, const Vector& y) const {
  return x.dot(xx * x) + x.dot(xy * y) + y.dot(yy * y) + x_lin.dot(x) +
         y_lin.dot(y) + constant;
}

Vector QuadraticObjective::grad_x(const Vector& x, const Vector& y) const {
  return (xx + xx.transpose()) * x + xy * y + x_lin;
}

Vector QuadraticObjective::grad_y(const Vector& x, const Vector& y) const {
  return xy.transpose() * x + (yy + yy.transpose()) * y + y_lin;
}

double QuadraticPiece::value(const Vector& x) const {
  return x.dot(xx * x) + x_lin.dot(x) + constant;
}

Vector QuadraticPiece::gradient(const Vector& x) const {
  return (xx + xx.transpose()) * x + x_lin;
}

Vector KktPoint::stacked() const {
  Vector z(x.size() + y.size() + lambda.size());
  z << x, y, lambda;
  return z;
}

KktPoint KktPoint::unstack(const Vector& z, int n, int m) {
  if (z.size() != n + 2 * m) {
    throw DimensionMismatch("stacked point has length " +
                            std::to_string(z.size()) + ", expected " +
                            std::to_string(n + 2 * m));
  }
  return KktPoint{z.head(n), z.segment(n, m), z.tail(m)};
}

bool KktPoint::operator==(const KktPoint& other) const {
  return x.size() == other.x.size() && y.size() == other.y.size() &&
         lambda.size() == other.lambda.size() && x == other.x &&
         y == other.y && lambda == other.lambda;
}

MpecProblem::MpecProblem(Matrix M, AffineParamMap qmap, QuadraticObjective f,
                         Box x_box, Box y_box, double c,
                         std::vector<QuadraticPiece> pieces,
                         std::string description)
    : n_(static_cast<int>(x_box.size())),
      m_(static_cast<int>(M.rows())),
      M_(std::move(M)),
      qmap_(std::move(qmap)),
      f_(std::move(f)),
      x_box_(std::move(x_box)),
      y_box_(std::move(y_box)),
      c_(c),
      pieces_(std::move(pieces)),
      description_(std::move(description)) {
  z_box_.reserve(static_cast<std::size_t>(dimension()));
  z_box_.insert(z_box_.end(), x_box_.begin(), x_box_.end());
  z_box_.insert(z_box_.end(), y_box_.begin(), y_box_.end());
  for (int i = 0; i < m_; ++i) z_box_.push_back({0.0, c_});
}

LcpInstance MpecProblem::lower_level_at(const Vector& x) const {
  return LcpInstance(M_, qmap_(x));
}

MpecProblem build_lcp_mpec(Matrix M, AffineParamMap qmap, QuadraticObjective f,
                           Box x_box, double multiplier_bound, Box y_box,
                           std::vector<QuadraticPiece> residual_pieces,
                           std::string description) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatch("M is " + shape(M) + ", not square");
  }
  require_finite(M, "M");
  const auto m = M.rows();
  const auto n = static_cast<Eigen::Index>(x_box.size());
  if (qmap.rows() != m) {
    throw DimensionMismatch("q(x) has " + std::to_string(qmap.rows()) +
                            " rows but M has order " + std::to_string(m));
  }
  if (qmap.cols() != n && !(m == 0 && qmap.cols() == 0)) {
    throw DimensionMismatch("Q has " + std::to_string(qmap.cols()) +
                            " columns but x has dimension " +
                            std::to_string(n));
  }
  if (m == 0) qmap = AffineParamMap(Matrix::Zero(0, n), Vector::Zero(0));

  require_shape(f.xx, n, n, "objective.xx");
  require_shape(f.xy, n, m, "objective.xy");
  require_shape(f.yy, m, m, "objective.yy");
  require_length(f.x_lin, n, "objective.x_lin");
  require_length(f.y_lin, m, "objective.y_lin");
  if (!std::isfinite(f.constant)) {
    throw InvalidArgument("objective constant is not finite");
  }

  if (!(multiplier_bound > 0.0) || !std::isfinite(multiplier_bound)) {
    throw InvalidArgument("multiplier bound must be positive and finite");
  }
  validate_box(x_box, "x_box");
  if (y_box.empty()) y_box.assign(static_cast<std::size_t>(m), {0.0, multiplier_bound});
  if (static_cast<Eigen::Index>(y_box.size()) != m) {
    throw DimensionMismatch("y_box has " + std::to_string(y_box.size()) +
                            " intervals, expected " + std::to_string(m));
  }
  validate_box(y_box, "y_box");

  for (std::size_t k = 0; k < residual_pieces.size(); ++k) {
    const auto tag = "residual_pieces[" + std::to_string(k) + "]";
    require_shape(residual_pieces[k].xx, n, n, tag + ".xx");
    require_length(residual_pieces[k].x_lin, n, tag + ".x_lin");
  }

  return MpecProblem(std::move(M), std::move(qmap), std::move(f),
                     std::move(x_box), std::move(y_box), multiplier_bound,
                     std::move(residual_pieces), std::move(description));
}

void check_dimensions(const MpecProblem& problem, const KktPoint& z) {
  if (z.x.size() != problem.n() || z.y.size() != problem.m() ||
      z.lambda.size() != problem.m()) {
    std::ostringstream os;
    os << "point has (n, m, l) = (" << z.x.size() << ", " << z.y.size()
       << ", " << z.lambda.size() << "), problem has (" << problem.n() << ", "
       << problem.m() << ", " << problem.m() << ")";
    throw DimensionMismatch(os.str());
  }
}

Vector eval_F(const MpecProblem& problem, const Vector& x, const Vector& y) {
  require_length(x, problem.n(), "x");
  require_length(y, problem.m(), "y");
  return problem.M() * y + problem.param_map()(x);
}

double explicit_residual(const MpecProblem& problem, const Vector& x) {
  const auto& pieces = problem.residual_pieces();
  if (pieces.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) best = std::min(best, p.value(x));
  return std::max(best, 0.0);
}

}  // namespace mpecpen
