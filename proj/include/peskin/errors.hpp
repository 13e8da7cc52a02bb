#pragma once

#include <stdexcept>
#include <string>

namespace peskin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid too coarse to resolve the requested band limit.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Negative-order Sobolev norm requested on a field with nonzero mean.
class MeanZeroViolation : public Error {
 public:
  using Error::Error;
};

/// The synthesized field lost strict positivity.
class PositivityFailure : public Error {
 public:
  using Error::Error;
};

/// Adaptive step fell below the dt floor.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

/// Malformed numerical input (non-finite samples, mass mismatch, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or CLI usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-monotone string configuration or seed mismatch.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Adjacent Lagrangian particles swapped order.
class FlowCrossingError : public Error {
 public:
  using Error::Error;
};

/// A closed-form oracle was evaluated outside its hypothesis.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Emitted files do not match the manifest.
class ChecksumError : public Error {
 public:
  using Error::Error;
};

}  // namespace peskin
