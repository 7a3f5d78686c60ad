#ifndef DSD_ERROR_HPP
#define DSD_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsd {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad distribution parameters, wrong dimension, sample too small.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A series or quadrature did not reach its tolerance. Carries the best value
/// obtained and the achieved error bound.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial, double bound)
      : Error(what), partial_(partial), bound_(bound) {}

  double partial_value() const noexcept { return partial_; }
  double error_bound() const noexcept { return bound_; }

 private:
  double partial_;
  double bound_;
};

}  // namespace dsd

#endif  // DSD_ERROR_HPP
