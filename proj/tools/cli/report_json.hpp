#pragma once

#include <string>

#include "json.hpp"
#include "mpecpen/model.hpp"
#include "mpecpen/penalty_solver.hpp"

namespace mpecpen::cli {

/// Shortest round-trip decimal; -0 prints as 0.
std::string format_number(double v);

/// [a,b,...] without spaces.
std::string format_vector(const Vector& v);

nlohmann::json vector_json(const Vector& v);
nlohmann::json point_json(const KktPoint& z);
nlohmann::json spec_json(const ResidualSpec& spec);
nlohmann::json report_json(const SolveReport& report);

}  // namespace mpecpen::cli
