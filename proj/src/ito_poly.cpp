#include "karc/ito_poly.hpp"

#include <cmath>

#include "karc/errors.hpp"

namespace karc {
namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in [0,1], got " + std::to_string(alpha));
}

}  // namespace

std::string to_string(ItoType type) {
  switch (type) {
    case ItoType::Type0: return "Type0";
    case ItoType::TypeI: return "TypeI";
    case ItoType::TypeII: return "TypeII";
    case ItoType::TypeIII: return "TypeIII";
  }
  return "?";
}

int ItoPolynomial::degree() const {
  switch (type) {
    case ItoType::Type0: return static_cast<int>(n);
    case ItoType::TypeI:
    case ItoType::TypeII: return static_cast<int>(s);
    case ItoType::TypeIII: return static_cast<int>(q * d);
  }
  return 0;
}

ItoPolynomial classify(const FareyPair& pair, std::int64_t n) {
  if (!are_neighbors(pair.lo, pair.hi, n))
    throw InvariantViolation("classify: " + pair.str() + " is not a Farey pair of order " +
                             std::to_string(n));
  ItoPolynomial poly;
  poly.pair = pair;
  poly.n = n;
  const bool lo_first = pair.lo.q <= pair.hi.q;
  const FareyFraction& small = lo_first ? pair.lo : pair.hi;
  const FareyFraction& large = lo_first ? pair.hi : pair.lo;
  poly.p = small.p;
  poly.q = small.q;
  poly.r = large.p;
  poly.s = large.q;
  poly.d = n / poly.q;

  if (poly.d == n) {
    poly.type = ItoType::Type0;
    return poly;
  }
  const std::int64_t qd = poly.q * poly.d;
  if (poly.s == qd)
    throw InternalInconsistency("classify: s = q*floor(n/q) for " + pair.str());
  if (poly.d == 1) {
    poly.type = ItoType::TypeI;
    if (n >= 4 && poly.q <= 2)
      throw InternalInconsistency("classify: Type I with q <= 2 at n >= 4 for " + pair.str());
  } else {
    poly.type = poly.s > qd ? ItoType::TypeII : ItoType::TypeIII;
  }
  return poly;
}

std::vector<double> reduced_coefficients(const ItoPolynomial& poly, double alpha) {
  check_alpha(alpha);
  const double beta = 1.0 - alpha;
  std::vector<double> c(static_cast<std::size_t>(poly.degree()) + 1, 0.0);

  // (t^stride - beta)^d expanded at offset `shift`.
  auto add_binomial_power = [&](std::int64_t stride, std::int64_t d, std::int64_t shift) {
    const auto row = binomial_row(static_cast<int>(d));
    for (std::int64_t k = 0; k <= d; ++k) {
      const double sign = ((d - k) % 2 == 0) ? 1.0 : -1.0;
      c[static_cast<std::size_t>(shift + stride * k)] +=
          static_cast<double>(row[static_cast<std::size_t>(k)]) * sign *
          std::pow(beta, static_cast<double>(d - k));
    }
  };

  switch (poly.type) {
    case ItoType::Type0:
      add_binomial_power(1, poly.n, 0);
      c[0] -= std::pow(alpha, static_cast<double>(poly.n));
      break;
    case ItoType::TypeI:
      c[static_cast<std::size_t>(poly.s)] += 1.0;
      c[static_cast<std::size_t>(poly.s - poly.q)] -= beta;
      c[0] -= alpha;
      break;
    case ItoType::TypeII:
      add_binomial_power(poly.q, poly.d, poly.s - poly.q * poly.d);
      c[0] -= std::pow(alpha, static_cast<double>(poly.d));
      break;
    case ItoType::TypeIII:
      add_binomial_power(poly.q, poly.d, 0);
      c[static_cast<std::size_t>(poly.q * poly.d - poly.s)] -= std::pow(alpha, static_cast<double>(poly.d));
      break;
  }
  return c;
}

ValueAndDerivative eval_reduced_with_derivative(const ItoPolynomial& poly, double alpha, cplx t) {
  check_alpha(alpha);
  const double beta = 1.0 - alpha;
  const double ad = std::pow(alpha, static_cast<double>(poly.d));
  switch (poly.type) {
    case ItoType::Type0: {
      const cplx u = t - beta;
      const cplx un1 = ipow(u, poly.n - 1);
      return {un1 * u - std::pow(alpha, static_cast<double>(poly.n)),
              static_cast<double>(poly.n) * un1};
    }
    case ItoType::TypeI:
    case ItoType::TypeII: {
      // t^e (t^q - beta)^d - alpha^d with e = s - q d (Type I is d = 1).
      const std::int64_t e = poly.s - poly.q * poly.d;
      const cplx tq1 = ipow(t, poly.q - 1);
      const cplx w = tq1 * t - beta;
      const cplx wd1 = ipow(w, poly.d - 1);
      const cplx te1 = ipow(t, e - 1);
      const cplx te = te1 * t;
      const cplx value = te * wd1 * w - ad;
      const cplx deriv = static_cast<double>(e) * te1 * wd1 * w +
                         te * static_cast<double>(poly.d) * wd1 * static_cast<double>(poly.q) * tq1;
      return {value, deriv};
    }
    case ItoType::TypeIII: {
      const std::int64_t e = poly.q * poly.d - poly.s;
      const cplx tq1 = ipow(t, poly.q - 1);
      const cplx w = tq1 * t - beta;
      const cplx wd1 = ipow(w, poly.d - 1);
      const cplx te1 = ipow(t, e - 1);
      const cplx value = wd1 * w - ad * te1 * t;
      const cplx deriv = static_cast<double>(poly.d) * wd1 * static_cast<double>(poly.q) * tq1 -
                         ad * static_cast<double>(e) * te1;
      return {value, deriv};
    }
  }
  return {};
}

cplx eval_reduced(const ItoPolynomial& poly, double alpha, cplx t) {
  return eval_reduced_with_derivative(poly, alpha, t).value;
}

cplx eval_full_ito(const FareyPair& pair, std::int64_t n, double alpha, cplx t) {
  const bool lo_first = pair.lo.q <= pair.hi.q;
  const std::int64_t q = lo_first ? pair.lo.q : pair.hi.q;
  const std::int64_t s = lo_first ? pair.hi.q : pair.lo.q;
  const std::int64_t d = n / q;
  const double beta = 1.0 - alpha;
  return ipow(t, s) * ipow(ipow(t, q) - beta, d) -
         std::pow(alpha, static_cast<double>(d)) * ipow(t, q * d);
}

}  // namespace karc
