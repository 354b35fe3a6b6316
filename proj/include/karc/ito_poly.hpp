#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "karc/farey.hpp"
#include "karc/polynomial.hpp"

namespace karc {

enum class ItoType { Type0, TypeI, TypeII, TypeIII };

std::string to_string(ItoType type);

/// A classified reduced Ito polynomial family.
///
/// (p, q) is the endpoint with the smaller denominator and (r, s) the other one,
/// so the traced root path runs from e^{2 pi i p/q} at alpha = 0 to
/// e^{2 pi i r/s} at alpha = 1. `d` is floor(n/q) and `beta` is always 1 - alpha.
///
/// Reduced forms (all monic, nonnegative exponents):
///   Type0   : (t - beta)^n - alpha^n
///   TypeI   : t^s - beta t^(s-q) - alpha
///   TypeII  (s > q d): t^(s-qd) (t^q - beta)^d - alpha^d      degree s
///   TypeIII (s < q d): (t^q - beta)^d - alpha^d t^(qd-s)      degree q d
struct ItoPolynomial {
  FareyPair pair;
  std::int64_t n = 0;
  std::int64_t p = 0, q = 1;
  std::int64_t r = 0, s = 1;
  std::int64_t d = 1;
  ItoType type = ItoType::Type0;

  [[nodiscard]] int degree() const;
  /// e^{2 pi i p/q}: the root the arc leaves at alpha = 0.
  [[nodiscard]] cplx start_point() const { return unit_root(p, q); }
  /// e^{2 pi i r/s}: the root the arc reaches at alpha = 1.
  [[nodiscard]] cplx end_point() const { return unit_root(r, s); }
};

ItoPolynomial classify(const FareyPair& pair, std::int64_t n);

/// Ascending real coefficients of the reduced polynomial at alpha.
std::vector<double> reduced_coefficients(const ItoPolynomial& poly, double alpha);

/// Factored-form evaluation of the reduced polynomial.
cplx eval_reduced(const ItoPolynomial& poly, double alpha, cplx t);
/// Factored-form evaluation with the t-derivative (product rule).
ValueAndDerivative eval_reduced_with_derivative(const ItoPolynomial& poly, double alpha, cplx t);

/// The unreduced Ito polynomial t^s (t^q - beta)^d - alpha^d t^{qd}.
cplx eval_full_ito(const FareyPair& pair, std::int64_t n, double alpha, cplx t);

}  // namespace karc
