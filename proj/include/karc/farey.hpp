#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace karc {

/// Largest supported Farey order; keeps p*s and q*r products far from overflow.
inline constexpr std::int64_t kMaxFareyOrder = 1'000'000;

/// A reduced fraction p/q in [0, 1]. Indexes the unit-circle point e^{2 pi i p/q}.
struct FareyFraction {
  std::int64_t p = 0;
  std::int64_t q = 1;

  /// Validating constructor: requires gcd(p, q) = 1 and 0 <= p <= q.
  static FareyFraction make(std::int64_t p, std::int64_t q);
  /// Parses "p/q".
  static FareyFraction parse(std::string_view text);

  [[nodiscard]] bool is_reduced() const;
  [[nodiscard]] double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  /// The point e^{2 pi i p/q} on the unit circle.
  [[nodiscard]] std::complex<double> unit_point() const;
  [[nodiscard]] std::string str() const;

  friend bool operator==(const FareyFraction& a, const FareyFraction& b) {
    return a.p == b.p && a.q == b.q;
  }
  /// Orders by rational value (cross multiplication, exact).
  friend std::strong_ordering operator<=>(const FareyFraction& a, const FareyFraction& b) {
    return a.p * b.q <=> b.p * a.q;
  }
};

/// Consecutive fractions of F_n, stored in rational order.
struct FareyPair {
  FareyFraction lo;
  FareyFraction hi;
  std::int64_t order = 1;

  /// The mirrored pair (1 - hi, 1 - lo).
  [[nodiscard]] FareyPair conjugate() const;
  [[nodiscard]] std::string str() const;  // "lo,hi"
  /// Parses "a/b,c/d" (either order) and validates the neighbor criterion at `order`.
  static FareyPair parse(std::string_view text, std::int64_t order);

  friend bool operator==(const FareyPair& a, const FareyPair& b) {
    return a.lo == b.lo && a.hi == b.hi && a.order == b.order;
  }
};

/// All of F_n in increasing order, from 0/1 to 1/1.
std::vector<FareyFraction> farey_sequence(std::int64_t n);

/// Neighbor test |p s - q r| = 1 and q + s > n. Throws on unreduced input.
bool are_neighbors(const FareyFraction& a, const FareyFraction& b, std::int64_t n);

/// Consecutive pairs of F_n with hi <= 1/2. Requires n >= 3.
std::vector<FareyPair> upper_half_pairs(std::int64_t n);

/// Constructs a validated pair from two neighbors given in any order.
FareyPair make_pair(const FareyFraction& a, const FareyFraction& b, std::int64_t n);

}  // namespace karc
