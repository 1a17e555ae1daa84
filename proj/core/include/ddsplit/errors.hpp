#pragma once

#include <stdexcept>
#include <string>

namespace ddsplit {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NewtonFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepRestrictionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Diverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLargeForDense : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AccuracyNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateErrors : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ddsplit
