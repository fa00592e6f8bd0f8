#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spatial {

// Base for every error raised while loading resources or reading files.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input at a known location. line/column are 1-based; 0 = unknown.
class ParseError : public Error {
 public:
  ParseError(std::string origin, std::size_t line, std::size_t column, const std::string& what)
      : Error(format(origin, line, column, what)),
        origin_(std::move(origin)),
        line_(line),
        column_(column) {}

  const std::string& origin() const { return origin_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& origin, std::size_t line, std::size_t column,
                            const std::string& what) {
    std::string out = origin;
    if (line > 0) {
      out += ":" + std::to_string(line);
      if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + what;
  }

  std::string origin_;
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates a semantic constraint (unknown category,
// span out of bounds, duplicate entry...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace spatial
