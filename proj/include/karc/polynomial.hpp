#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace karc {

using cplx = std::complex<double>;

struct ValueAndDerivative {
  cplx value;
  cplx derivative;
};

/// e^{2 pi i k / m}, with the angle reduced into [0, 2 pi) in exact integer arithmetic first.
cplx unit_root(std::int64_t k, std::int64_t m);

/// Horner evaluation of an ascending coefficient vector, with derivative.
ValueAndDerivative horner(std::span<const cplx> coeffs, cplx t);
ValueAndDerivative horner(std::span<const double> coeffs, cplx t);

/// Running error bound of Horner: sum |a_k| |t|^k.
double horner_magnitude(std::span<const cplx> coeffs, double abs_t);

/// Integer power of a complex number by repeated squaring.
cplx ipow(cplx z, std::int64_t e);

/// Row d of Pascal's triangle (exact for d <= 66).
std::vector<std::int64_t> binomial_row(int d);

}  // namespace karc
