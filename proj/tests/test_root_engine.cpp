#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "karc/arc_tracer.hpp"
#include "karc/errors.hpp"
#include "karc/root_engine.hpp"
#include "oracles.hpp"

using namespace karc;

namespace {

// Greedy nearest matching is enough when the expected roots are well separated.
double set_distance(std::vector<cplx> got, const std::vector<cplx>& want) {
  double worst = 0.0;
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](cplx a, cplx b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

PolynomialFamily ito_family(const ItoPolynomial& p) {
  PolynomialFamily f;
  f.degree = p.degree();
  f.coefficients = [p](double a) {
    const auto c = reduced_coefficients(p, a);
    return std::vector<cplx>(c.begin(), c.end());
  };
  f.evaluate = [p](double a, cplx t) { return eval_reduced_with_derivative(p, a, t); };
  return f;
}

}  // namespace

TEST_CASE("roots of unity") {
  const std::vector<double> c{-1, 0, 0, 1};
  const auto rs = all_roots(std::span<const double>(c));
  CHECK(rs.roots.size() == 3);
  CHECK(rs.residual_bound < 1e-12);
  CHECK(set_distance(rs.roots, {1.0, unit_root(1, 3), unit_root(2, 3)}) < 1e-12);
}

TEST_CASE("quartic against the cubic oracle") {
  const std::vector<double> c{-0.5, -0.5, 0, 0, 1};
  const auto rs = all_roots(std::span<const double>(c));
  const auto cubic = oracle::monic_cubic_roots(1.0, 1.0, 0.5);
  CHECK(set_distance(rs.roots, {1.0, cubic[0], cubic[1], cubic[2]}) < 1e-12);
  CHECK(rs.residual_bound <= 1e-10);
}

TEST_CASE("double roots cluster") {
  // (t^3 - 1)^2
  const std::vector<double> c{1, 0, 0, -2, 0, 0, 1};
  const auto rs = all_roots(std::span<const double>(c));
  REQUIRE(rs.roots.size() == 6);
  for (std::int64_t k = 0; k < 3; ++k) {
    const auto w = unit_root(k, 3);
    CHECK(std::count_if(rs.roots.begin(), rs.roots.end(), [&](cplx r) { return std::abs(r - w) < 1e-6; }) == 2);
  }
}

TEST_CASE("trailing zeros are exact roots") {
  const std::vector<double> c{0, 0, -1, 1};  // t^2 (t - 1)
  const auto rs = all_roots(std::span<const double>(c));
  CHECK(std::count(rs.roots.begin(), rs.roots.end(), cplx(0.0)) == 2);
}

TEST_CASE("degenerate polynomials") {
  const std::vector<double> constant{3.0};
  CHECK_THROWS_AS(all_roots(std::span<const double>(constant)), DegeneratePolynomialError);
  const std::vector<double> lead_zero{1.0, 2.0, 0.0};
  CHECK_THROWS_AS(all_roots(std::span<const double>(lead_zero)), DegeneratePolynomialError);
}

TEST_CASE("random polynomials meet the residual target") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const int deg = 1 + static_cast<int>(rng() % 40);
    std::vector<cplx> c(deg + 1);
    for (auto& x : c) x = {g(rng), g(rng)};
    const auto rs = all_roots(std::span<const cplx>(c));
    CHECK(rs.roots.size() == static_cast<std::size_t>(deg));
    CHECK(rs.residual_bound <= 1e-10);
  }
}

TEST_CASE("assignment matches brute force") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (auto& row : cost)
      for (auto& x : row) x = u(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double s = 0;
      for (int i = 0; i < n; ++i) s += cost[i][perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto got = min_cost_assignment(cost);
    double s = 0;
    for (int i = 0; i < n; ++i) s += cost[i][got[i]];
    CHECK(s == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("square roots of alpha") {
  PolynomialFamily f;
  f.degree = 2;
  f.coefficients = [](double a) { return std::vector<cplx>{-a, 0.0, 1.0}; };
  const auto paths = track_paths(f, {0, 0.25, 0.5, 0.75, 1});
  REQUIRE(paths.paths.size() == 2);
  for (std::size_t j = 0; j < paths.grid.size(); ++j) {
    const double r = std::sqrt(paths.grid[j]);
    const cplx a = paths.paths[0][j];
    const cplx b = paths.paths[1][j];
    CHECK(std::abs(a + b) < 1e-12);
    CHECK(std::abs(std::abs(a) - r) < 1e-12);
  }
  // Continuity: each path keeps its sign.
  CHECK(paths.paths[0].back().real() * paths.paths[0][1].real() > 0);
}

TEST_CASE("type I path from omega_3 ends at i") {
  const auto p = classify(FareyPair::parse("1/4,1/3", 4), 4);
  const auto paths = track_paths(ito_family(p), uniform_grid(64));
  int found = 0;
  for (const auto& path : paths.paths)
    if (std::abs(path.front() - unit_root(1, 3)) < 1e-9) {
      ++found;
      CHECK(std::abs(path.back() - cplx(0, 1)) < 1e-9);
    }
  CHECK(found == 1);
}

TEST_CASE("type 0 paths are straight") {
  const auto p = classify(FareyPair::parse("0/1,1/5", 5), 5);
  const auto paths = track_paths(ito_family(p), uniform_grid(64));
  REQUIRE(paths.paths.size() == 5);
  for (const auto& path : paths.paths) {
    // Identify k from the alpha = 1 end.
    std::int64_t k = 0;
    for (std::int64_t j = 0; j < 5; ++j)
      if (std::abs(path.back() - unit_root(j, 5)) < 1e-9) k = j;
    const cplx w = unit_root(k, 5);
    for (std::size_t j = 0; j < paths.grid.size(); ++j) {
      const double a = paths.grid[j];
      CHECK(std::abs(path[j] - ((1 - a) + a * w)) < 1e-12);
      if (j > 0) {
        const double step = std::abs(path[j] - path[j - 1]);
        CHECK(step == doctest::Approx(std::abs(w - 1.0) * (a - paths.grid[j - 1])).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("path multisets, closure and conjugate symmetry") {
  for (std::int64_t n = 3; n <= 9; ++n) {
    for (const auto& pair : upper_half_pairs(n)) {
      const auto p = classify(pair, n);
      const auto fam = ito_family(p);
      const auto paths = track_paths(fam, uniform_grid(64));
      for (std::size_t j = 0; j < paths.grid.size(); j += 7) {
        std::vector<cplx> at;
        for (const auto& path : paths.paths) at.push_back(path[j]);
        for (const auto& z : at) {
          CHECK(std::abs(eval_reduced(p, paths.grid[j], z)) < 1e-9);
          // The conjugate of every path value is also a path value.
          double best = INFINITY;
          for (const auto& w : at) best = std::min(best, std::abs(std::conj(z) - w));
          CHECK(best < 1e-6);
        }
      }
      std::vector<cplx> ends;
      for (const auto& path : paths.paths) ends.push_back(path.back());
      const auto coeffs = reduced_coefficients(p, 1.0);
      const auto fresh = all_roots(std::span<const double>(coeffs)).roots;
      CHECK(set_distance(ends, fresh) < 1e-6);
    }
  }
}

TEST_CASE("halving the grid leaves arcs unchanged") {
  for (std::int64_t n = 3; n <= 12; ++n) {
    for (const auto& pair : upper_half_pairs(n)) {
      const auto p = classify(pair, n);
      if (p.type == ItoType::Type0) continue;
      const auto coarse = trace_arc(p);
      TraceConfig fine_cfg;
      fine_cfg.initial_grid = uniform_grid(128);
      const auto fine = trace_arc(p, fine_cfg);
      std::size_t j = 0;
      double worst = 0.0;
      for (const auto& s : coarse.samples) {
        while (j < fine.samples.size() && fine.samples[j].alpha < s.alpha) ++j;
        REQUIRE(j < fine.samples.size());
        REQUIRE(fine.samples[j].alpha == s.alpha);
        worst = std::max(worst, std::abs(fine.samples[j].lambda - s.lambda));
      }
      CHECK_MESSAGE(worst <= 1e-8, pair.str());
    }
  }
}

TEST_CASE("refinement cap raises path ambiguity") {
  PolynomialFamily f;
  f.degree = 2;
  f.coefficients = [](double a) { return std::vector<cplx>{-std::polar(1.0, 200.0 * a), 0.0, 1.0}; };
  RootEngineConfig cfg;
  CHECK_NOTHROW(track_paths(f, uniform_grid(64), cfg));
  cfg.max_grid_points = 100;
  CHECK_THROWS_AS(track_paths(f, uniform_grid(64), cfg), PathAmbiguityError);
}

TEST_CASE("grid validation") {
  PolynomialFamily f;
  f.degree = 1;
  f.coefficients = [](double a) { return std::vector<cplx>{-a, 1.0}; };
  CHECK_THROWS_AS(track_paths(f, {0.1, 1.0}), DomainError);
  CHECK_THROWS_AS(track_paths(f, {0.0, 0.5, 0.5, 1.0}), DomainError);
}
