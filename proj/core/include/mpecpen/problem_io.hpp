#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mpecpen/model.hpp"

namespace mpecpen {

/// Reads a JSON problem file. Required keys: n, m, M, Q, q0, objective,
/// x_box, multiplier_bound. Optional: y_box, residual_pieces, description.
///
/// Malformed JSON raises ParseError (with line and column); a well-formed
/// document that does not describe a valid problem raises SchemaError,
/// including dimension and box validation failures.
MpecProblem parse_problem_file(const std::filesystem::path& path);
MpecProblem parse_problem_text(std::string_view text);

/// Pretty-printed JSON that parse_problem_text() maps back to an equal
/// problem. Doubles are written in shortest round-trip form.
std::string serialize_problem(const MpecProblem& problem);

}  // namespace mpecpen
