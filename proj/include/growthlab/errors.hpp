#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace growthlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed function-spec text; `offset` is the byte position of the problem.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t at)
      : Error(what + " at byte " + std::to_string(at)), offset(at) {}
};

/// Well-formed input that violates an operation's preconditions.
struct DomainError : Error {
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, step underflow, NaN).
struct NumericalError : Error {
  double last_value;
  explicit NumericalError(const std::string& what, double last = 0.0)
      : Error(what), last_value(last) {}
};

/// derivative() has no closed form for this node combination.
struct NoClosedForm : Error {
  using Error::Error;
};

}  // namespace growthlab
