#include "mpecpen/errors.hpp"

namespace mpecpen {

ParseError::ParseError(const std::string& msg, std::size_t line,
                       std::size_t column)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(const std::string& field, const std::string& msg)
    : Error(field.empty() ? msg : field + ": " + msg), field_(field) {}

}  // namespace mpecpen
