#pragma once

#include <stdexcept>
#include <string>

namespace uamcts {

// Cholesky failure or other unrecoverable floating-point trouble.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The planning domain cannot support the request (e.g. no legal actions).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A wall-clock search finished without completing a single iteration.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message names the offending row/column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uamcts
