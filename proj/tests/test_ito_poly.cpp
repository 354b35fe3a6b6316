#include <doctest.h>

#include <cmath>
#include <random>

#include "karc/errors.hpp"
#include "karc/ito_poly.hpp"
#include "oracles.hpp"

using namespace karc;

namespace {

ItoPolynomial poly_of(const char* pair, std::int64_t n) { return classify(FareyPair::parse(pair, n), n); }

// Ascending coefficients of prod (t - r).
std::vector<cplx> from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (const auto& r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  return c;
}

}  // namespace

TEST_CASE("classification of order 8") {
  auto p = poly_of("1/8,1/7", 8);
  CHECK(p.q == 7);
  CHECK(p.s == 8);
  CHECK(p.d == 1);
  CHECK(p.type == ItoType::TypeI);

  p = poly_of("1/4,2/7", 8);
  CHECK((p.q == 4 && p.s == 7 && p.d == 2));
  CHECK(p.type == ItoType::TypeIII);

  p = poly_of("1/3,3/8", 8);
  CHECK((p.q == 3 && p.s == 8 && p.d == 2));
  CHECK(p.type == ItoType::TypeII);

  p = poly_of("0/1,1/8", 8);
  CHECK((p.q == 1 && p.d == 8));
  CHECK(p.type == ItoType::Type0);

  int counts[4] = {0, 0, 0, 0};
  for (const auto& pair : upper_half_pairs(8)) ++counts[static_cast<int>(classify(pair, 8).type)];
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 5);
  CHECK(counts[2] == 2);
  CHECK(counts[3] == 3);
}

TEST_CASE("classification is total and consistent") {
  for (std::int64_t n = 3; n <= 32; ++n) {
    for (const auto& pair : upper_half_pairs(n)) {
      const auto p = classify(pair, n);
      CHECK(p.q <= p.s);
      CHECK(p.d == n / p.q);
      if (p.type == ItoType::Type0) {
        CHECK(pair.str() == "0/1,1/" + std::to_string(n));
      } else {
        CHECK(p.s != p.q * p.d);
        if (p.type == ItoType::TypeI) {
          CHECK(p.d == 1);
          if (n >= 4) CHECK(p.q > 2);
        }
        if (p.type == ItoType::TypeII) CHECK((p.d > 1 && p.s > p.q * p.d));
        if (p.type == ItoType::TypeIII) CHECK((p.d > 1 && p.s < p.q * p.d));
      }
    }
  }
}

TEST_CASE("reduced coefficients") {
  const auto t1 = poly_of("1/4,1/3", 4);
  CHECK(reduced_coefficients(t1, 0.5) == std::vector<double>{-0.5, -0.5, 0, 0, 1});

  const auto t0 = poly_of("0/1,1/3", 3);
  CHECK(reduced_coefficients(t0, 1.0) == std::vector<double>{-1, 0, 0, 1});

  // s > q d: the extra factor t^(s - q d) multiplies (t^q - 1)^d at alpha = 0.
  const auto t2 = poly_of("1/3,3/8", 8);
  CHECK(reduced_coefficients(t2, 0.0) == std::vector<double>{0, 0, 1, 0, 0, -2, 0, 0, 1});
  CHECK(t2.degree() == 8);

  const auto t3 = poly_of("1/4,2/7", 8);
  CHECK(t3.degree() == 8);
  CHECK(reduced_coefficients(t3, 0.0) == std::vector<double>{1, 0, 0, 0, -2, 0, 0, 0, 1});

  CHECK_THROWS_AS(reduced_coefficients(t1, -0.1), DomainError);
  CHECK_THROWS_AS(reduced_coefficients(t1, 1.5), DomainError);
}

TEST_CASE("endpoint factorizations") {
  for (std::int64_t n = 3; n <= 12; ++n) {
    for (const auto& pair : upper_half_pairs(n)) {
      const auto p = classify(pair, n);
      if (p.type != ItoType::TypeI) continue;
      // alpha = 0: zero of order s - q, then the q-th roots of unity.
      std::vector<cplx> roots(static_cast<std::size_t>(p.s - p.q), 0.0);
      for (std::int64_t k = 0; k < p.q; ++k) roots.push_back(unit_root(k, p.q));
      auto expect = from_roots(roots);
      auto got = reduced_coefficients(p, 0.0);
      REQUIRE(got.size() == expect.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-12);
      // alpha = 1: the s-th roots of unity.
      roots.clear();
      for (std::int64_t k = 0; k < p.s; ++k) roots.push_back(unit_root(k, p.s));
      expect = from_roots(roots);
      got = reduced_coefficients(p, 1.0);
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-12);
    }
  }
}

TEST_CASE("factored evaluation") {
  const auto t1 = poly_of("1/4,1/3", 4);
  CHECK(std::abs(eval_reduced(t1, 0.5, 1.0)) < 1e-15);

  for (std::int64_t n : {3, 5, 8, 12}) {
    const auto t0 = poly_of(("0/1,1/" + std::to_string(n)).c_str(), n);
    for (double alpha : {0.0, 0.3, 0.77, 1.0})
      for (std::int64_t k = 0; k < n; ++k)
        CHECK(std::abs(eval_reduced(t0, alpha, (1 - alpha) + alpha * unit_root(k, n))) < 1e-13);
  }

  // Zero of order s - q at the origin when alpha = 0.
  const auto p = poly_of("2/5,3/7", 7);
  const auto v = eval_reduced_with_derivative(p, 0.0, 0.0);
  CHECK(v.value == cplx(0.0));
  CHECK(v.derivative == cplx(0.0));
  CHECK(reduced_coefficients(p, 0.0)[0] == 0.0);
}

TEST_CASE("factored and expanded evaluation agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ItoPolynomial> polys;
  for (std::int64_t n = 3; n <= 16; ++n)
    for (const auto& pair : upper_half_pairs(n)) polys.push_back(classify(pair, n));
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& p = polys[rng() % polys.size()];
    const double alpha = unif(rng);
    const cplx t = std::polar(0.2 + 0.9 * unif(rng), 2 * M_PI * unif(rng));
    const auto coeffs = reduced_coefficients(p, alpha);
    const auto expanded = horner(std::span<const double>(coeffs), t);
    const auto factored = eval_reduced_with_derivative(p, alpha, t);
    double scale = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) scale += std::abs(coeffs[k]) * std::pow(std::abs(t), k);
    CHECK(std::abs(expanded.value - factored.value) <= 1e-12 * scale);
    double dscale = 0.0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) dscale += k * std::abs(coeffs[k]) * std::pow(std::abs(t), k - 1);
    CHECK(std::abs(expanded.derivative - factored.derivative) <= 1e-12 * dscale);
  }
}

TEST_CASE("full Ito polynomial") {
  for (std::int64_t n = 3; n <= 12; ++n) {
    for (const auto& pair : upper_half_pairs(n)) {
      const auto p = classify(pair, n);
      CHECK(std::abs(eval_full_ito(pair, n, 0.0, p.start_point())) < 1e-12);
      CHECK(std::abs(eval_full_ito(pair, n, 1.0, p.end_point())) < 1e-12);
    }
  }
  // Roots of t^3 + t^2 + t + 1/2, the cubic factor of t^4 - t/2 - 1/2.
  const auto pair = FareyPair::parse("1/4,1/3", 4);
  for (const auto& z : oracle::monic_cubic_roots(1.0, 1.0, 0.5)) CHECK(std::abs(eval_full_ito(pair, 4, 0.5, z)) < 1e-9);
  const auto roots = oracle::monic_cubic_roots(1.0, 1.0, 0.5);
  CHECK(std::abs(roots[1] - cplx(-0.17610056, 0.86071662)) < 1e-8);
}
