#pragma once

#include <complex>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

namespace karc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidOrderError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class DegeneratePolynomialError : public Error {
 public:
  using Error::Error;
};

/// Root iteration hit its cap; the best iterate is kept for inspection.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, std::vector<std::complex<double>> best)
      : Error(what), best_iterate(std::move(best)) {}
  std::vector<std::complex<double>> best_iterate;
};

/// Grid refinement could not separate root paths on [alpha_lo, alpha_hi].
class PathAmbiguityError : public Error {
 public:
  PathAmbiguityError(const std::string& what, double lo, double hi)
      : Error(what), alpha_lo(lo), alpha_hi(hi) {}
  double alpha_lo;
  double alpha_hi;
};

class ArcIdentificationError : public Error {
 public:
  using Error::Error;
};

class SectorViolationError : public Error {
 public:
  SectorViolationError(const std::string& what, double a) : Error(what), alpha(a) {}
  double alpha;
};

class NotAPowerPairError : public Error {
 public:
  using Error::Error;
};

class PowerMapError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An arc of a region failed to build; `cause` holds the original error.
class ArcConstructionError : public Error {
 public:
  ArcConstructionError(const std::string& pair, const std::string& what, std::exception_ptr c)
      : Error("arc " + pair + ": " + what), pair_id(pair), cause(std::move(c)) {}
  std::string pair_id;
  std::exception_ptr cause;
};

}  // namespace karc
