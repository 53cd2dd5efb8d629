#pragma once

#include <stdexcept>
#include <string>

namespace wmlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A point was required to lie in a domain and did not.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed domain, map, or experiment parameters.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Triangular factorization of a Gram matrix hit a non-positive pivot.
class FactorizationError : public Error {
public:
  FactorizationError(int degree, double pivot)
    : Error("Gram factorization lost positivity at degree " + std::to_string(degree) +
            " (pivot " + std::to_string(pivot) + "); degree too large for the grid"),
      degree_(degree),
      pivot_(pivot) {}

  int degree() const noexcept { return degree_; }
  double pivot() const noexcept { return pivot_; }

private:
  int degree_;
  double pivot_;
};

/// Numerical evaluation became unreliable (e.g. a negative Bergman radicand).
class InstabilityError : public Error {
public:
  using Error::Error;
};

/// A polyline left the domain.
class InvalidPathError : public Error {
public:
  using Error::Error;
};

/// The grid discretization is too coarse to connect the requested points.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// A quantity diverges (derivative of a cusp at its tip, distance to a boundary point).
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// Too few usable samples for a power-law fit.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace wmlab
