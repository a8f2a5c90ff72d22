#pragma once

#include <string>
#include <string_view>

#include "mpecpen/model.hpp"

namespace mpecpen {

enum class ResidualKind {
  Min,           ///< ||min(y, F(x,y))||
  Product,       ///< sign violations of y, F plus |y'F|
  KktComposite,  ///< stationarity + primal + dual + complementarity blocks
};

enum class Norm { L1, L2 };

/// Whether the KKT stationarity block enters as ||F - lambda|| or squared.
enum class StationarityForm { Norm, Squared };

struct ResidualSpec {
  ResidualKind kind = ResidualKind::KktComposite;
  Norm norm = Norm::L2;
  double gamma = 1.0;
  StationarityForm stationarity = StationarityForm::Norm;

  /// Throws InvalidArgument unless 0 < gamma <= 1.
  void validate() const;
};

/// Below this value the order-1/2 penalty gradient is declared unavailable.
inline constexpr double kKinkTolerance = 1e-12;

std::string_view to_string(ResidualKind kind);
std::string_view to_string(Norm norm);
std::string_view to_string(StationarityForm form);
/// Accepts "min", "product", "kkt". Throws InvalidArgument otherwise.
ResidualKind parse_residual_kind(std::string_view text);
Norm parse_norm(std::string_view text);
StationarityForm parse_stationarity_form(std::string_view text);

/// ||min(y, w)|| with the componentwise min.
double min_residual(const Vector& y, const Vector& w, Norm norm);

/// y'w. Nonnegative only when y >= 0 and w >= 0; the sign is the caller's
/// business.
double product_residual(const Vector& y, const Vector& w);

/// ||F(x,y) - lambda|| + sum [-y_i]_+ + sum [-lambda_i]_+ + sum |lambda_i y_i|,
/// with the norm (and optional squaring) of the first block taken from spec.
/// Zero exactly on the feasible set of the one-level reformulation.
double kkt_residual(const MpecProblem& problem, const KktPoint& z,
                    const ResidualSpec& spec);

/// The residual a penalty is built from: the lower-level residual selected
/// by spec.kind plus the problem's explicit residual pieces, if any.
/// The Product kind here is sum [-y]_+ + sum [-F]_+ + |y'F| so that it stays
/// nonnegative off the orthant.
double penalty_residual(const MpecProblem& problem, const KktPoint& z,
                        const ResidualSpec& spec);

/// f(x, y) + alpha * r(z)^gamma. Throws InvalidArgument when alpha < 0.
double penalized_objective(const MpecProblem& problem, const KktPoint& z,
                           double alpha, const ResidualSpec& spec);

/// One-sided directional derivative of min(u, v) along (du, dv).
double min_dirderiv(double u, double v, double du, double dv);

/// Gradient of f + alpha * sqrt(r) in stacked (x, y, lambda) order, where r
/// is the KKT residual with squared L2 stationarity (plus explicit pieces).
/// Throws AtKink when r <= kink_tolerance.
Vector grad_penalized_sqrt(const MpecProblem& problem, const KktPoint& z,
                           double alpha,
                           double kink_tolerance = kKinkTolerance);

/// r(z + t dz) = value + slope t + curvature t^2 + o(t^2) as t -> 0+.
/// Every residual term is piecewise polynomial along a ray, so the pieces
/// active for small t > 0 are selected first and then expanded.
struct RayExpansion {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

RayExpansion residual_along_ray(const MpecProblem& problem, const KktPoint& z,
                                const KktPoint& dz, const ResidualSpec& spec);

/// One-sided directional derivative of the penalized objective at z along dz.
/// Returns +infinity where r^gamma grows faster than linearly.
double penalized_dirderiv(const MpecProblem& problem, const KktPoint& z,
                          const KktPoint& dz, double alpha,
                          const ResidualSpec& spec);

}  // namespace mpecpen
