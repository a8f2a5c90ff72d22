#include "cli.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpecpen/errors.hpp"
#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/penalty_solver.hpp"
#include "mpecpen/problem_io.hpp"
#include "mpecpen/residuals.hpp"
#include "probes.hpp"
#include "report_json.hpp"
#include "reproduce.hpp"

#ifndef MPECPEN_FIXTURE_DIR
#define MPECPEN_FIXTURE_DIR "fixtures"
#endif

namespace mpecpen::cli {
namespace {

using nlohmann::json;

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::string spaced = text;
  for (char& ch : spaced) {
    if (ch == ',' || ch == ';') ch = ' ';
  }
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw InvalidArgument(what + ": '" + token + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

// Rows separated by ';', entries by whitespace or ','.
Matrix parse_matrix(const std::string& text, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto end = std::min(text.find(';', begin), text.size());
    auto row = parse_numbers(text.substr(begin, end - begin), what);
    if (!row.empty()) rows.push_back(std::move(row));
    begin = end + 1;
  }
  if (rows.empty()) throw InvalidArgument(what + " is empty");
  Matrix M(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw InvalidArgument(what + " has rows of different lengths");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

struct SolverFlags {
  double gamma = 0.5;
  double alpha0 = 1.0;
  double growth = 10.0;
  double eps_feas = 1e-8;
  double eps_stat = 1e-6;
  std::uint64_t seed = 0;
  std::string norm = "l2";
  std::string residual = "kkt";
  std::string stationarity = "norm";
  std::string start;
  std::optional<double> alpha_fixed;
  int max_outer = 12;
  int max_inner = 5000;
  int starts = 1;

  ResidualSpec spec() const {
    ResidualSpec s{parse_residual_kind(residual), parse_norm(norm), gamma,
                   parse_stationarity_form(stationarity)};
    s.validate();
    return s;
  }

  PenaltyConfig config() const {
    PenaltyConfig c;
    c.alpha0 = alpha_fixed ? *alpha_fixed : alpha0;
    c.alpha_fixed = alpha_fixed.has_value();
    c.growth = growth;
    c.eps_feas = eps_feas;
    c.eps_stat = eps_stat;
    c.seed = seed;
    c.max_outer = max_outer;
    c.max_inner = max_inner;
    c.residual = spec();
    c.validate();
    return c;
  }
};

void add_residual_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--gamma", f.gamma, "Penalty exponent in (0, 1]")->capture_default_str();
  cmd->add_option("--norm", f.norm, "Norm of the residual blocks")
      ->check(CLI::IsMember({"l1", "l2"}))
      ->capture_default_str();
  cmd->add_option("--residual", f.residual, "Residual kind")
      ->check(CLI::IsMember({"min", "product", "kkt"}))
      ->capture_default_str();
  cmd->add_option("--stationarity", f.stationarity, "KKT stationarity block form")
      ->check(CLI::IsMember({"norm", "squared"}))
      ->capture_default_str();
}

KktPoint start_point(const MpecProblem& p, const std::string& text) {
  if (text.empty()) return default_start(p);
  const Vector v = to_vector(parse_numbers(text, "--start"));
  if (v.size() == p.n()) return default_start(p, v);
  if (v.size() == p.dimension()) {
    return KktPoint::unstack(project_to_box(p.variable_box(), v), p.n(), p.m());
  }
  throw DimensionMismatch("--start needs " + std::to_string(p.n()) + " or " +
                          std::to_string(p.dimension()) + " values");
}

int do_solve(const std::string& path, const SolverFlags& flags, std::ostream& out) {
  const MpecProblem p = parse_problem_file(path);
  const PenaltyConfig config = flags.config();
  SolveReport report;
  if (flags.starts > 1) {
    const auto reports = multi_start(p, config, flags.starts);
    report = best_report(reports);
  } else {
    report = penalty_continuation(p, config, start_point(p, flags.start));
  }
  out << report_json(report).dump(2) << "\n";
  switch (report.classification) {
    case Classification::FeasibleMinimizer:
      return kExitFeasible;
    case Classification::InfeasiblePenaltyStationary:
      return kExitInfeasible;
    case Classification::IterationLimit:
      return kExitIterationLimit;
  }
  return kExitIterationLimit;
}

int do_oracle(const std::string& m_text, const std::string& q_text, std::ostream& out) {
  const Matrix M = parse_matrix(m_text, "--M");
  const Vector q = to_vector(parse_numbers(q_text, "--q"));
  const SolutionSet s = solve_lcp_enumerate(LcpInstance(M, q));
  if (s.empty()) out << "[]\n";
  for (const auto& y : s.points) out << format_vector(y) << "\n";
  return 0;
}

json estimate_json(const ProbeResult& r) {
  const auto& e = r.estimate;
  return {{"probe", r.name},
          {"gamma_hat", e.gamma_hat},
          {"tau_hat", e.tau_hat},
          {"tau_max", e.tau_max},
          {"sample_count", e.sample_count},
          {"r_min", e.r_min},
          {"r_max", e.r_max},
          {"fit_rms", e.fit_rms},
          {"degenerate", e.degenerate},
          {"bound_coverage", r.bound_coverage},
          {"flags", json::array()}};
}

int do_probe(const std::string& fixture, const std::string& ray, int count,
             std::uint64_t seed, const std::string& t_text, std::ostream& out) {
  if (fixture.empty() == ray.empty()) {
    throw InvalidArgument("give exactly one of --fixture and --ray");
  }
  if (!fixture.empty()) {
    const ProbeResult r = run_fixture_probe(fixture, count, seed);
    out << "id\tresidual\tdistance\n";
    for (const auto& row : r.rows) {
      out << format_number(row.key) << "\t" << format_number(row.residual) << "\t"
          << format_number(row.distance) << "\n";
    }
    out << estimate_json(r).dump() << "\n";
    return 0;
  }
  if (ray != "q1") throw InvalidArgument("unknown ray '" + ray + "'");
  const auto t = t_text.empty() ? q1_ray_parameters() : parse_numbers(t_text, "--t");
  const RayReport r = run_q1_ray(t);
  out << "t\tresidual\tdistance\n";
  for (const auto& row : r.rows) {
    out << format_number(row.t) << "\t" << format_number(row.residual) << "\t"
        << format_number(row.distance) << "\n";
  }
  json flags = json::array();
  if (r.global_bound_refuted) flags.push_back("GLOBAL-BOUND-REFUTED");
  out << json{{"probe", "ray-q1"},
              {"global_bound_refuted", r.global_bound_refuted},
              {"solution_set_empty", r.solution_set_empty},
              {"printed_data_solution_count", solve_lcp_enumerate(q1_lcp()).size()},
              {"residual_band", r.residual_band},
              {"distance_growth", r.distance_growth},
              {"note", r.note},
              {"flags", flags}}
             .dump()
      << "\n";
  return 0;
}

int do_reproduce(const std::string& target, const std::string& dir, std::ostream& out,
                 std::ostream& err) {
  const auto results = reproduce(target, dir);
  const json report = results_json(results);
  out << report.dump(2) << "\n";
  print_table(results, err);
  return report.at("passed").get<bool>() ? 0 : 1;
}

int do_residual(const std::string& path, const std::string& point_text, double alpha,
                const SolverFlags& flags, std::ostream& out) {
  const MpecProblem p = parse_problem_file(path);
  const Vector v = to_vector(parse_numbers(point_text, "--point"));
  const KktPoint z = KktPoint::unstack(v, p.n(), p.m());
  const ResidualSpec spec = flags.spec();
  out << json{{"residual", penalty_residual(p, z, spec)},
              {"objective", p.objective().value(z.x, z.y)},
              {"penalized", penalized_objective(p, z, alpha, spec)},
              {"alpha", alpha},
              {"spec", spec_json(spec)}}
             .dump(2)
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact penalty solver for MPECs with LCP lower levels", "mpecpen"};
  app.require_subcommand(1);

  SolverFlags solve_flags;
  std::string solve_path;
  auto* solve = app.add_subcommand("solve", "Penalty continuation on a problem file");
  solve->add_option("problem", solve_path, "Problem file")->required();
  add_residual_flags(solve, solve_flags);
  solve->add_option("--alpha0", solve_flags.alpha0, "Initial penalty parameter")->capture_default_str();
  solve->add_option("--growth", solve_flags.growth, "Penalty growth factor")->capture_default_str();
  solve->add_option("--eps-feas", solve_flags.eps_feas, "Feasibility tolerance")->capture_default_str();
  solve->add_option("--eps-stat", solve_flags.eps_stat, "Stationarity tolerance")->capture_default_str();
  solve->add_option("--seed", solve_flags.seed, "Seed for multi-start")->capture_default_str();
  solve->add_option("--start", solve_flags.start, "Start: x, or the full (x, y, lambda)");
  solve->add_option("--alpha-fixed", solve_flags.alpha_fixed, "Hold alpha at this value");
  solve->add_option("--max-outer", solve_flags.max_outer, "Outer rounds")->capture_default_str();
  solve->add_option("--max-inner", solve_flags.max_inner, "Inner polls per round")->capture_default_str();
  solve->add_option("--starts", solve_flags.starts, "Random starts (best one reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string m_text;
  std::string q_text;
  auto* oracle = app.add_subcommand("oracle", "Enumerate the solutions of LCP(q, M)");
  oracle->add_option("--M", m_text, "Matrix, rows separated by ';'")->required();
  oracle->add_option("--q", q_text, "Vector")->required();

  std::string fixture;
  std::string ray;
  std::string t_text;
  int count = kDefaultCloudSize;
  std::uint64_t probe_seed = 0;
  auto* probe = app.add_subcommand("probe", "Error-bound probes");
  probe->add_option("--fixture", fixture, "Probe fixture")
      ->check(CLI::IsMember(probe_fixture_names()));
  probe->add_option("--ray", ray, "Ray test")->check(CLI::IsMember({"q1"}));
  probe->add_option("--t", t_text, "Ray parameters");
  probe->add_option("--count", count, "Cloud size")->check(CLI::PositiveNumber)->capture_default_str();
  probe->add_option("--seed", probe_seed, "Cloud seed")->capture_default_str();

  std::string target = "all";
  std::string fixture_dir = MPECPEN_FIXTURE_DIR;
  auto* repro = app.add_subcommand("reproduce", "Run the golden reproduction cases");
  repro->add_option("case", target, "Case id or 'all'")->capture_default_str();
  repro->add_option("--fixtures", fixture_dir, "Fixture directory")->capture_default_str();

  SolverFlags res_flags;
  res_flags.gamma = 1.0;
  std::string res_path;
  std::string point_text;
  double alpha = 0.0;
  auto* residual = app.add_subcommand("residual", "Evaluate the residual at a point");
  residual->add_option("problem", res_path, "Problem file")->required();
  residual->add_option("--point", point_text, "Stacked (x, y, lambda)")->required();
  residual->add_option("--alpha", alpha, "Penalty parameter")->capture_default_str();
  add_residual_flags(residual, res_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve) return do_solve(solve_path, solve_flags, out);
    if (*oracle) return do_oracle(m_text, q_text, out);
    if (*probe) return do_probe(fixture, ray, count, probe_seed, t_text, out);
    if (*repro) return do_reproduce(target, fixture_dir, out, err);
    if (*residual) return do_residual(res_path, point_text, alpha, res_flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace mpecpen::cli
