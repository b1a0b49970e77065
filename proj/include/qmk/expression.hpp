#pragma once

// Text form of polynomials: identifiers, rational literals `p/q`, `+ - * ^`
// and parentheses. `^` takes a non-negative integer literal.

#include <string>
#include <string_view>

#include "qmk/graded_algebra.hpp"

namespace qmk {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a whole string as one expression over `ctx`. Unknown identifiers
/// are errors.
Polynomial parse_expression(std::string_view text, const ContextPtr& ctx);

}  // namespace qmk
