#include "reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "mpecpen/errorbound_probe.hpp"
#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/penalty_solver.hpp"
#include "mpecpen/problem_io.hpp"
#include "mpecpen/residuals.hpp"
#include "probes.hpp"
#include "report_json.hpp"

namespace mpecpen::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kInnerBudget = 5000;
constexpr double kInnerTol = 1e-10;
constexpr int kMultiStarts = 20;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out[i++] = x;
  return out;
}

KktPoint point(const MpecProblem& p, Vector x, Vector y, Vector lambda) {
  KktPoint z{std::move(x), std::move(y), std::move(lambda)};
  check_dimensions(p, z);
  return z;
}

KktPoint origin(const MpecProblem& p) {
  return point(p, Vector::Zero(p.n()), Vector::Zero(p.m()), Vector::Zero(p.m()));
}

json solutions_json(const SolutionSet& s) {
  json out = json::array();
  for (const auto& y : s.points) out.push_back(vector_json(y));
  return out;
}

const ResidualSpec kProduct1{ResidualKind::Product, Norm::L2, 1.0,
                             StationarityForm::Norm};
const ResidualSpec kProductHalf{ResidualKind::Product, Norm::L2, 0.5,
                                StationarityForm::Norm};

json q1_ray() {
  const auto t = q1_ray_parameters();
  const RayReport report = run_q1_ray(t);
  json residuals = json::array();
  for (const auto& row : report.rows) residuals.push_back(row.residual);
  return {{"ray_parameters", t},
          {"residual_on_ray", residuals},
          {"printed_data_solution_count", solve_lcp_enumerate(q1_lcp()).size()},
          {"global_bound_refuted", report.global_bound_refuted}};
}

json bilevel_order1(const fs::path& dir) {
  const auto p = parse_problem_file(dir / "bilevel.mpec");
  const std::vector<double> alphas{1, 10, 100, 1000};
  json mins = json::array();
  json below = json::array();
  for (const double a : alphas) {
    const KktPoint z = inner_minimize(p, a, kProduct1, origin(p), kInnerBudget, kInnerTol);
    const double phi = penalized_objective(p, z, a, kProduct1);
    mins.push_back(phi);
    below.push_back(phi <= -1.0 / (8.0 * a));
  }
  return {{"alphas", alphas},
          {"stationarity_at_origin", check_stationarity(p, origin(p), 1.0, kProduct1)},
          {"penalized_min_from_origin", mins},
          {"below_eighth_bound", below}};
}

json bilevel_sqrt(const fs::path& dir) {
  const auto p = parse_problem_file(dir / "bilevel.mpec");
  const std::vector<double> alphas{1, 2, 4, 8};
  json stat = json::array();
  double worst = 0.0;
  for (const double a : alphas) {
    stat.push_back(check_stationarity(p, origin(p), a, kProductHalf));
    PenaltyConfig config;
    config.alpha0 = a;
    config.alpha_fixed = true;
    config.residual = kProductHalf;
    for (const auto& r : multi_start(p, config, kMultiStarts)) {
      worst = std::max(worst, std::abs(r.final_penalized));
    }
  }
  const KktPoint quarter = point(p, vec({0}), vec({0.25}), vec({0.25}));
  return {{"alphas", alphas},
          {"stationarity_at_origin", stat},
          {"multistart_worst_abs_penalized", worst},
          {"penalized_at_quarter_point", penalized_objective(p, quarter, 2.0, kProductHalf)}};
}

json dirderiv() {
  return {{"tie", min_dirderiv(0, 0, 1, -2)},
          {"u_below_v", min_dirderiv(0, 1, 1, -2)},
          {"u_above_v", min_dirderiv(1, 0, 1, -2)}};
}

json addq1(const fs::path& dir) {
  const auto p = parse_problem_file(dir / "addq1.mpec");
  const auto lp = parse_problem_file(dir / "lcp-param.mpec");
  const ResidualSpec l2{ResidualKind::KktComposite, Norm::L2, 1.0, StationarityForm::Norm};
  const ResidualSpec l1{ResidualKind::KktComposite, Norm::L1, 1.0, StationarityForm::Norm};
  const KktPoint z = point(p, vec({1}), vec({0, 1}), vec({0, 0}));
  const KktPoint feasible = point(p, vec({1}), vec({0.4, 0.2}), vec({0, 0}));
  const KktPoint off = point(lp, vec({1}), vec({-1, 0}), vec({0, 0}));
  return {{"F_at_point", vector_json(eval_F(p, z.x, z.y))},
          {"kkt_residual_at_point", kkt_residual(p, z, l2)},
          {"kkt_residual_feasible", kkt_residual(p, feasible, l2)},
          {"lcp_param_kkt_residual_l1", kkt_residual(lp, off, l1)}};
}

json addq2(const fs::path& dir) {
  const auto p = parse_problem_file(dir / "lcp-param.mpec");
  json out;
  json path_obj = json::array();
  for (const int x : {0, 1, 2}) {
    const Vector xv = vec({static_cast<double>(x)});
    const SolutionSet s = solve_lcp_enumerate(p.lower_level_at(xv));
    out["solutions_x" + std::to_string(x)] = solutions_json(s);
    if (!s.empty()) path_obj.push_back(p.objective().value(xv, s.points.front()));
  }
  out["objective_on_path"] = path_obj;

  const ResidualSpec min_l1{ResidualKind::Min, Norm::L1, 1.0, StationarityForm::Norm};
  json res = json::array();
  json pen = json::array();
  for (const auto& [x, y] : {std::pair{1.0, vec({0, 0})}, std::pair{1.0, vec({1, 0})},
                             std::pair{2.0, vec({0, 0})}}) {
    const KktPoint z = point(p, vec({x}), y, Vector::Zero(2));
    res.push_back(penalty_residual(p, z, min_l1));
    pen.push_back(penalized_objective(p, z, 4.0, min_l1));
  }
  out["min_residual_l1"] = res;
  out["penalized_alpha4"] = pen;

  std::vector<Vector> grid;
  for (int k = 0; k <= 200; ++k) grid.push_back(vec({0.01 * k}));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : parametric_solution_path(p.M(), p.param_map(), grid)) {
    for (const auto& y : pt.solutions.points) {
      best = std::min(best, p.objective().value(pt.x, y));
    }
  }
  out["grid_optimum"] = best;

  const SolveReport r =
      penalty_continuation(p, PenaltyConfig{}, default_start(p, vec({2})));
  out["continuation_classification"] = to_string(r.classification);
  out["continuation_residual"] = r.final_residual;
  out["continuation_gap_to_grid"] = std::abs(r.final_objective - best);
  return out;
}

json addq3(const fs::path& dir) {
  const auto bl = parse_problem_file(dir / "bilevel.mpec");
  PenaltyConfig order1;
  order1.residual = kProduct1;
  const SolveReport r = penalty_continuation(bl, order1, origin(bl));

  json grid_min = json::array();
  for (const double a : {1.0, 2.0, 4.0, 8.0}) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; j <= 200; ++j) {
        const KktPoint z = point(bl, vec({0.01 * i}), vec({0.01 * j}), vec({0}));
        best = std::min(best, penalized_objective(bl, z, a, kProductHalf));
      }
    }
    grid_min.push_back(best);
  }

  const auto lp = parse_problem_file(dir / "lcp-param.mpec");
  std::vector<Vector> grid;
  for (int k = 0; k <= 100; ++k) grid.push_back(vec({0.02 * k}));
  const double modulus = estimate_lipschitz_modulus(
      parametric_solution_path(lp.M(), lp.param_map(), grid));
  const double bound = solution_map_lipschitz_bound(lp.M(), lp.param_map().Q());
  return {{"first_round_objective_negative", r.objective_history.front() < 0.0},
          {"sqrt_grid_min", grid_min},
          {"lipschitz_modulus", modulus},
          {"lipschitz_bound", bound},
          {"modulus_within_bound", modulus <= bound}};
}

json q5(const fs::path& dir) {
  const auto p = parse_problem_file(dir / "q5-toy.mpec");
  PenaltyConfig config;
  config.alpha0 = 2.0;
  config.alpha_fixed = true;
  const SolveReport a = penalty_continuation(p, config, default_start(p, vec({3})));
  const SolveReport b = penalty_continuation(p, config, default_start(p, vec({0.1})));
  return {{"classification_from_3", to_string(a.classification)},
          {"t_from_3", a.final_point.x[0]},
          {"residual_from_3", a.final_residual},
          {"residual_from_3_positive", a.final_residual},
          {"classification_from_0.1", to_string(b.classification)},
          {"t_from_0.1", b.final_point.x[0]}};
}

json hoffman_case() {
  const ProbeResult half = run_fixture_probe("hoffman-halfspace", kDefaultCloudSize, 0);
  const ProbeResult mixed = run_fixture_probe("hoffman-mixed", kDefaultCloudSize, 0);
  Matrix A(1, 2);
  A << 1, 0;
  const Polyhedron P{A, Vector::Zero(1), Matrix(0, 2), Vector(0)};
  const auto inside = sample_cloud(Box{{-1.0, 0.0}, {-1.0, 1.0}}, 50, 0);
  const ErrorBoundEstimate e = hoffman_baseline(P, inside);
  return {{"halfspace_tau", half.estimate.tau_max},
          {"mixed_tau_l1", mixed.estimate.tau_max},
          {"bound_coverage", {half.bound_coverage, mixed.bound_coverage}},
          {"inside_cloud_degenerate", e.degenerate},
          {"inside_cloud_tau", e.tau_max}};
}

json exponents() {
  return {{"linear_halfspace_gamma",
           run_fixture_probe("linear-halfspace", kDefaultCloudSize, 0).estimate.gamma_hat},
          {"quad_scalar_gamma",
           run_fixture_probe("quad-scalar", kDefaultCloudSize, 0).estimate.gamma_hat},
          {"lcp_q2_gamma",
           run_fixture_probe("lcp-q2", kDefaultCloudSize, 0).estimate.gamma_hat}};
}

bool close(const json& expected, const json& actual, double tol) {
  if (expected.is_number()) {
    return actual.is_number() &&
           std::abs(actual.get<double>() - expected.get<double>()) <= tol;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!close(expected[i], actual[i], tol)) return false;
    }
    return true;
  }
  return expected == actual;
}

json load_fixture(const fs::path& dir) {
  const fs::path path = dir / "repro.json";
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return json::parse(in);
}

}  // namespace

const std::vector<std::string>& repro_case_ids() {
  static const std::vector<std::string> ids{
      "q1-ray",         "q2-bilevel-order1",    "q2-bilevel-sqrt",
      "q3-dirderiv",    "addq1-residual",       "addq2-lcp",
      "addq3-sqrt-necessity", "q5-infeasible",  "hoffman",
      "quad-exponent"};
  return ids;
}

json compute_case(const std::string& id, const fs::path& dir) {
  if (id == "q1-ray") return q1_ray();
  if (id == "q2-bilevel-order1") return bilevel_order1(dir);
  if (id == "q2-bilevel-sqrt") return bilevel_sqrt(dir);
  if (id == "q3-dirderiv") return dirderiv();
  if (id == "addq1-residual") return addq1(dir);
  if (id == "addq2-lcp") return addq2(dir);
  if (id == "addq3-sqrt-necessity") return addq3(dir);
  if (id == "q5-infeasible") return q5(dir);
  if (id == "hoffman") return hoffman_case();
  if (id == "quad-exponent") return exponents();
  throw UnknownCase("unknown case '" + id + "'");
}

CaseResult evaluate_case(const json& fixture_case, const json& actual) {
  CaseResult out;
  out.id = fixture_case.at("id").get<std::string>();
  out.description = fixture_case.value("description", "");
  const double case_tol = fixture_case.value("tolerance", 0.0);
  out.passed = true;
  for (const auto& [name, entry] : fixture_case.at("expected").items()) {
    CheckResult check;
    check.name = name;
    check.provenance = entry.value("provenance", "");
    check.expected = entry;
    check.expected.erase("provenance");
    check.actual = actual.contains(name) ? actual.at(name) : json();
    const json& a = check.actual;
    if (entry.contains("value")) {
      check.passed = close(entry["value"], a, entry.value("tolerance", case_tol));
    } else if (entry.contains("at_most")) {
      check.passed = a.is_number() && a.get<double>() <= entry["at_most"].get<double>();
    } else if (entry.contains("at_least")) {
      check.passed = a.is_number() && a.get<double>() >= entry["at_least"].get<double>();
    } else if (entry.contains("between")) {
      check.passed = a.is_number() && a.get<double>() >= entry["between"][0].get<double>() &&
                     a.get<double>() <= entry["between"][1].get<double>();
    }
    out.passed = out.passed && check.passed;
    out.checks.push_back(std::move(check));
  }
  return out;
}

std::vector<CaseResult> reproduce(const std::string& target, const fs::path& dir) {
  std::vector<std::string> ids;
  if (target == "all") {
    ids = repro_case_ids();
  } else if (std::find(repro_case_ids().begin(), repro_case_ids().end(), target) !=
             repro_case_ids().end()) {
    ids = {target};
  } else {
    throw UnknownCase("unknown case '" + target + "'");
  }
  const json fixture = load_fixture(dir);
  std::vector<CaseResult> results;
  for (const auto& id : ids) {
    const auto& cases = fixture.at("cases");
    const auto it = std::find_if(cases.begin(), cases.end(),
                                 [&](const json& c) { return c.at("id") == id; });
    if (it == cases.end()) throw InvalidArgument("repro.json has no case '" + id + "'");
    results.push_back(evaluate_case(*it, compute_case(id, dir)));
  }
  return results;
}

json results_json(const std::vector<CaseResult>& results) {
  json cases = json::array();
  bool all = true;
  for (const auto& r : results) {
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"provenance", c.provenance},
                        {"expected", c.expected},
                        {"actual", c.actual},
                        {"passed", c.passed}});
    }
    cases.push_back({{"id", r.id}, {"passed", r.passed}, {"checks", checks}});
    all = all && r.passed;
  }
  return {{"passed", all}, {"cases", cases}};
}

void print_table(const std::vector<CaseResult>& results, std::ostream& os) {
  for (const auto& r : results) {
    std::size_t ok = 0;
    for (const auto& c : r.checks) ok += c.passed ? 1 : 0;
    os << (r.passed ? "PASS  " : "FAIL  ") << r.id << "  (" << ok << "/"
       << r.checks.size() << " checks)\n";
    for (const auto& c : r.checks) {
      if (!c.passed) {
        os << "      " << c.name << ": expected " << c.expected.dump()
           << ", got " << c.actual.dump() << "\n";
      }
    }
  }
}

}  // namespace mpecpen::cli
