#pragma once

#include <stdexcept>
#include <string>

namespace veil {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries a 1-based source position.
struct parse_error : error {
  std::string message;  // without the position prefix
  int line;
  int column;
  parse_error(const std::string& msg, int line_, int column_)
      : error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
        message(msg), line(line_), column(column_) {}
};

/// Operation applied outside its domain (absent species, wrong type, ...).
struct domain_error : error {
  using error::error;
};

/// Ill-typed AST construction (arity mismatch, identity at e1, ...).
struct type_error : error {
  using error::error;
};

/// An enumeration or table would exceed a configured bound.
struct budget_error : error {
  using error::error;
};

/// Substitution would capture a variable and renaming is disabled.
struct capture_error : error {
  using error::error;
};

}  // namespace veil
