#pragma once

#include <stdexcept>
#include <string>

namespace spssim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration. Reported before the first subframe.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A table lookup outside the table's domain (e.g. TBS for zero RBs).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// A payload that cannot be carried by any allocation within the bandwidth.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A function argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The scheduler was invoked in a state that the MAC flow should never produce.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

/// A runtime invariant of the simulation was broken.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace spssim
