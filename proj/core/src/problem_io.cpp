#include "mpecpen/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mpecpen/errors.hpp"

namespace mpecpen {
namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(key, "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

int as_dimension(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return static_cast<int>(v.get<long long>());
}

Vector as_vector(const json& v, Eigen::Index len, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  if (static_cast<Eigen::Index>(v.size()) != len) {
    throw SchemaError(path, "has " + std::to_string(v.size()) +
                                " entries, expected " + std::to_string(len));
  }
  Vector out(len);
  for (Eigen::Index i = 0; i < len; ++i) {
    out[i] = as_number(v[static_cast<std::size_t>(i)],
                       path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix as_matrix(const json& v, Eigen::Index rows, Eigen::Index cols,
                 const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of rows");
  // A matrix with no entries may be written as [].
  if ((rows == 0 || cols == 0) && v.empty()) return Matrix::Zero(rows, cols);
  if (static_cast<Eigen::Index>(v.size()) != rows) {
    throw SchemaError(path, "has " + std::to_string(v.size()) +
                                " rows, expected " + std::to_string(rows));
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    out.row(i) = as_vector(v[static_cast<std::size_t>(i)], cols,
                           path + "[" + std::to_string(i) + "]")
                     .transpose();
  }
  return out;
}

Box as_box(const json& v, std::size_t len, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of [lo, hi]");
  if (v.size() != len) {
    throw SchemaError(path, "has " + std::to_string(v.size()) +
                                " intervals, expected " + std::to_string(len));
  }
  Box out;
  for (std::size_t i = 0; i < len; ++i) {
    const auto tag = path + "[" + std::to_string(i) + "]";
    const auto iv = as_vector(v[i], 2, tag);
    out.push_back({iv[0], iv[1]});
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json matrix_json(const Matrix& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json box_json(const Box& box) {
  json out = json::array();
  for (const auto& iv : box) out.push_back(json::array({iv.lo, iv.hi}));
  return out;
}

MpecProblem from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "top level must be an object");
  const int n = as_dimension(require(doc, "n"), "n");
  const int m = as_dimension(require(doc, "m"), "m");

  Matrix M = as_matrix(require(doc, "M"), m, m, "M");
  Matrix Q = as_matrix(require(doc, "Q"), m, n, "Q");
  Vector q0 = as_vector(require(doc, "q0"), m, "q0");

  const json& obj = require(doc, "objective");
  if (!obj.is_object()) throw SchemaError("objective", "expected an object");
  auto f = QuadraticObjective::zero(n, m);
  if (obj.contains("xx")) f.xx = as_matrix(obj["xx"], n, n, "objective.xx");
  if (obj.contains("xy")) f.xy = as_matrix(obj["xy"], n, m, "objective.xy");
  if (obj.contains("yy")) f.yy = as_matrix(obj["yy"], m, m, "objective.yy");
  if (obj.contains("x_lin")) f.x_lin = as_vector(obj["x_lin"], n, "objective.x_lin");
  if (obj.contains("y_lin")) f.y_lin = as_vector(obj["y_lin"], m, "objective.y_lin");
  if (obj.contains("const")) f.constant = as_number(obj["const"], "objective.const");

  Box x_box = as_box(require(doc, "x_box"), static_cast<std::size_t>(n), "x_box");
  const double c = as_number(require(doc, "multiplier_bound"), "multiplier_bound");
  Box y_box;
  if (doc.contains("y_box")) {
    y_box = as_box(doc["y_box"], static_cast<std::size_t>(m), "y_box");
  }

  std::vector<QuadraticPiece> pieces;
  if (doc.contains("residual_pieces")) {
    const json& arr = doc["residual_pieces"];
    if (!arr.is_array()) throw SchemaError("residual_pieces", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const auto tag = "residual_pieces[" + std::to_string(k) + "]";
      if (!arr[k].is_object()) throw SchemaError(tag, "expected an object");
      QuadraticPiece p{Matrix::Zero(n, n), Vector::Zero(n), 0.0};
      if (arr[k].contains("xx")) p.xx = as_matrix(arr[k]["xx"], n, n, tag + ".xx");
      if (arr[k].contains("x_lin")) p.x_lin = as_vector(arr[k]["x_lin"], n, tag + ".x_lin");
      if (arr[k].contains("const")) p.constant = as_number(arr[k]["const"], tag + ".const");
      pieces.push_back(std::move(p));
    }
  }

  std::string description;
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) {
      throw SchemaError("description", "expected a string");
    }
    description = doc["description"].get<std::string>();
  }

  try {
    return build_lcp_mpec(std::move(M), AffineParamMap(std::move(Q), std::move(q0)),
                          std::move(f), std::move(x_box), c, std::move(y_box),
                          std::move(pieces), std::move(description));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError("", e.what());
  }
}

}  // namespace

MpecProblem parse_problem_text(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw SchemaError("", "empty problem file");
  }
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError(e.what(), line, column);
  }
  return from_json(doc);
}

MpecProblem parse_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

std::string serialize_problem(const MpecProblem& problem) {
  json doc;
  if (!problem.description().empty()) doc["description"] = problem.description();
  doc["n"] = problem.n();
  doc["m"] = problem.m();
  doc["M"] = matrix_json(problem.M());
  doc["Q"] = matrix_json(problem.param_map().Q());
  doc["q0"] = vector_json(problem.param_map().q0());
  const auto& f = problem.objective();
  doc["objective"] = {{"xx", matrix_json(f.xx)},       {"xy", matrix_json(f.xy)},
                      {"yy", matrix_json(f.yy)},       {"x_lin", vector_json(f.x_lin)},
                      {"y_lin", vector_json(f.y_lin)}, {"const", f.constant}};
  doc["x_box"] = box_json(problem.x_box());
  doc["y_box"] = box_json(problem.y_box());
  doc["multiplier_bound"] = problem.multiplier_bound();
  if (!problem.residual_pieces().empty()) {
    json arr = json::array();
    for (const auto& p : problem.residual_pieces()) {
      arr.push_back({{"xx", matrix_json(p.xx)},
                     {"x_lin", vector_json(p.x_lin)},
                     {"const", p.constant}});
    }
    doc["residual_pieces"] = std::move(arr);
  }
  return doc.dump(2) + "\n";
}

}  // namespace mpecpen
