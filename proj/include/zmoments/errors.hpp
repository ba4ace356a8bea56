#ifndef ZMOMENTS_ERRORS_HPP
#define ZMOMENTS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zmoments {

// Error categories surfaced by the library. The CLI maps them onto exit
// codes: InvalidArgument -> 2, ResourceLimit -> 3, InsufficientPrecision -> 4.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the Riemann-Siegel evaluator below its validity floor.
class UseEulerMaclaurin : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace zmoments

#endif  // ZMOMENTS_ERRORS_HPP
