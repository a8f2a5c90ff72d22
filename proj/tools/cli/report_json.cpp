#include "report_json.hpp"

#include <charconv>
#include <cmath>

namespace mpecpen::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  if (!std::isfinite(v)) return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_vector(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(v[i]);
  }
  return out + "]";
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i] == 0.0 ? 0.0 : v[i]);
  return out;
}

json point_json(const KktPoint& z) {
  return {{"x", vector_json(z.x)}, {"y", vector_json(z.y)},
          {"lambda", vector_json(z.lambda)}};
}

json spec_json(const ResidualSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"norm", to_string(spec.norm)},
          {"gamma", spec.gamma},
          {"stationarity", to_string(spec.stationarity)}};
}

json report_json(const SolveReport& r) {
  return {{"classification", to_string(r.classification)},
          {"final_point", point_json(r.final_point)},
          {"final_residual", r.final_residual},
          {"final_objective", r.final_objective},
          {"final_penalized", r.final_penalized},
          {"stationarity_measure", r.stationarity_measure},
          {"alpha_history", r.alpha_history},
          {"residual_history", r.residual_history},
          {"objective_history", r.objective_history},
          {"penalized_history", r.penalized_history},
          {"outer_iterations", r.outer_iterations},
          {"inner_iterations", r.inner_iterations},
          {"residual", spec_json(r.residual)}};
}

}  // namespace mpecpen::cli
