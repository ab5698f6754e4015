#ifndef CDVRP_ERRORS_HPP
#define CDVRP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdvrp {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input shapes: non-square matrices, length mismatches, etc.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// The instance (or a requested operation on it) admits no feasible answer.
// `vertex` names the offending customer when there is one.
class InfeasibleError : public Error {
 public:
  static constexpr std::size_t kNoVertex = static_cast<std::size_t>(-1);

  explicit InfeasibleError(const std::string& what, std::size_t vertex = kNoVertex)
      : Error(what), vertex_(vertex) {}

  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

// An exhaustive search hit one of its caps before finishing.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

// Text input could not be turned into an instance or solution.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cdvrp

#endif  // CDVRP_ERRORS_HPP
