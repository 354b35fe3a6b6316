#include "karc/polynomial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace karc {

cplx unit_root(std::int64_t k, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("unit_root: nonpositive modulus");
  k %= m;
  if (k < 0) k += m;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == m) return {-1.0, 0.0};
  if (4 * k == m) return {0.0, 1.0};
  if (4 * k == 3 * m) return {0.0, -1.0};
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
  return {std::cos(theta), std::sin(theta)};
}

ValueAndDerivative horner(std::span<const cplx> coeffs, cplx t) {
  cplx value{0.0, 0.0};
  cplx deriv{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    deriv = deriv * t + value;
    value = value * t + *it;
  }
  return {value, deriv};
}

ValueAndDerivative horner(std::span<const double> coeffs, cplx t) {
  cplx value{0.0, 0.0};
  cplx deriv{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    deriv = deriv * t + value;
    value = value * t + *it;
  }
  return {value, deriv};
}

double horner_magnitude(std::span<const cplx> coeffs, double abs_t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * abs_t + std::abs(*it);
  return acc;
}

cplx ipow(cplx z, std::int64_t e) {
  if (e < 0) return 1.0 / ipow(z, -e);
  cplx result{1.0, 0.0};
  while (e > 0) {
    if (e & 1) result *= z;
    z *= z;
    e >>= 1;
  }
  return result;
}

std::vector<std::int64_t> binomial_row(int d) {
  if (d < 0 || d > 66) throw std::out_of_range("binomial_row: d outside [0, 66]");
  std::vector<std::int64_t> row{1};
  for (int i = 1; i <= d; ++i) {
    std::vector<std::int64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int k = 1; k < i; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  return row;
}

}  // namespace karc
