#pragma once

#include <stdexcept>
#include <string>

namespace rbm {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Gram matrix is not symmetric or not positive definite.
class InvalidGram : public Error {
public:
  using Error::Error;
};

/// A linear system is singular to working precision.
class SingularSystem : public Error {
public:
  SingularSystem(const std::string& what, double pivot)
      : Error(what + " (pivot magnitude " + std::to_string(pivot) + ")"), pivot_(pivot) {}

  double pivot() const noexcept { return pivot_; }

private:
  double pivot_;
};

/// A new snapshot adds no stable direction to the reduced space.
class DependentSnapshot : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace rbm
