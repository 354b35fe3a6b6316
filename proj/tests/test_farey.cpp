#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "karc/errors.hpp"
#include "karc/farey.hpp"

using namespace karc;

namespace {

// Euler totient by sieve.
std::vector<std::int64_t> totients(std::int64_t n) {
  std::vector<std::int64_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), 0);
  for (std::int64_t p = 2; p <= n; ++p)
    if (phi[p] == p)
      for (std::int64_t k = p; k <= n; k += p) phi[k] -= phi[k] / p;
  return phi;
}

// All coprime p/q with q <= n, sorted by value.
std::vector<FareyFraction> brute_farey(std::int64_t n) {
  std::vector<FareyFraction> out;
  for (std::int64_t q = 1; q <= n; ++q)
    for (std::int64_t p = 0; p <= q; ++p)
      if (std::gcd(p, q) == 1) out.push_back({p, q});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.p * b.q < b.p * a.q; });
  return out;
}

std::vector<std::string> strs(const std::vector<FareyFraction>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.str());
  return out;
}

}  // namespace

TEST_CASE("farey sequence small orders") {
  CHECK(strs(farey_sequence(1)) == std::vector<std::string>{"0/1", "1/1"});
  CHECK(strs(farey_sequence(4)) == std::vector<std::string>{"0/1", "1/4", "1/3", "1/2", "2/3", "3/4", "1/1"});

  std::vector<std::string> upper;
  for (const auto& f : farey_sequence(8))
    if (2 * f.p <= f.q) upper.push_back(f.str());
  CHECK(upper == std::vector<std::string>{"0/1", "1/8", "1/7", "1/6", "1/5", "1/4", "2/7", "1/3", "3/8", "2/5",
                                          "3/7", "1/2"});
}

TEST_CASE("farey sequence rejects bad orders") {
  CHECK_THROWS_AS(farey_sequence(0), InvalidOrderError);
  CHECK_THROWS_AS(farey_sequence(-3), InvalidOrderError);
  CHECK_THROWS_AS(farey_sequence(kMaxFareyOrder + 1), InvalidOrderError);
}

TEST_CASE("farey sequence matches brute force and the totient count") {
  const auto phi = totients(200);
  std::int64_t count = 1;
  for (std::int64_t n = 1; n <= 200; ++n) {
    count += phi[n];
    const auto seq = farey_sequence(n);
    REQUIRE(static_cast<std::int64_t>(seq.size()) == count);
    if (n <= 40) CHECK(seq == brute_farey(n));
  }
}

TEST_CASE("neighbor criterion agrees with adjacency") {
  CHECK(are_neighbors({1, 3}, {1, 2}, 4));
  CHECK_FALSE(are_neighbors({1, 4}, {1, 2}, 4));
  for (std::int64_t n = 1; n <= 30; ++n) CHECK(are_neighbors({0, 1}, {1, n}, n));

  for (std::int64_t n = 1; n <= 64; ++n) {
    const auto seq = farey_sequence(n);
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (std::size_t j = i + 1; j < seq.size(); ++j)
        REQUIRE(are_neighbors(seq[i], seq[j], n) == (j == i + 1));
  }
}

TEST_CASE("neighbor test rejects unreduced or oversized input") {
  CHECK_THROWS_AS(are_neighbors({2, 4}, {1, 3}, 4), InvariantViolation);
  CHECK_THROWS_AS(are_neighbors({1, 5}, {1, 4}, 4), InvariantViolation);
  CHECK_THROWS_AS(FareyFraction::make(2, 6), InvariantViolation);
  CHECK_THROWS_AS(FareyFraction::make(3, 2), InvariantViolation);
}

TEST_CASE("upper half pairs") {
  auto ids = [](std::int64_t n) {
    std::vector<std::string> out;
    for (const auto& p : upper_half_pairs(n)) out.push_back(p.str());
    return out;
  };
  CHECK(ids(3) == std::vector<std::string>{"0/1,1/3", "1/3,1/2"});
  CHECK(ids(4) == std::vector<std::string>{"0/1,1/4", "1/4,1/3", "1/3,1/2"});
  CHECK(ids(8).size() == 11);
  CHECK_THROWS_AS(upper_half_pairs(2), UnsupportedOrderError);

  for (std::int64_t n = 3; n <= 64; ++n)
    for (const auto& p : upper_half_pairs(n)) {
      CHECK(std::gcd(p.lo.q, p.hi.q) == 1);
      CHECK(p.lo < p.hi);
      CHECK(2 * p.hi.p <= p.hi.q);
    }
}

TEST_CASE("pair parsing and conjugation") {
  const auto pair = FareyPair::parse("3/8,1/3", 8);
  CHECK(pair.str() == "1/3,3/8");
  CHECK(pair.conjugate().str() == "5/8,2/3");
  CHECK(pair.conjugate().conjugate() == pair);
  CHECK_THROWS(FareyPair::parse("1/4,1/2", 4));
  CHECK_THROWS(FareyPair::parse("garbage", 4));
}
