#include "karc/farey.hpp"

#include <charconv>
#include <numeric>

#include "karc/errors.hpp"
#include "karc/polynomial.hpp"

namespace karc {
namespace {

void check_order(std::int64_t n) {
  if (n < 1 || n > kMaxFareyOrder)
    throw InvalidOrderError("Farey order must lie in [1, " + std::to_string(kMaxFareyOrder) +
                            "], got " + std::to_string(n));
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw DomainError("not an integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

FareyFraction FareyFraction::make(std::int64_t p, std::int64_t q) {
  FareyFraction f{p, q};
  if (!f.is_reduced())
    throw InvariantViolation("not a reduced fraction in [0,1]: " + std::to_string(p) + "/" +
                             std::to_string(q));
  return f;
}

FareyFraction FareyFraction::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw DomainError("expected p/q, got '" + std::string(text) + "'");
  return make(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

bool FareyFraction::is_reduced() const {
  return q >= 1 && p >= 0 && p <= q && std::gcd(p, q) == 1;
}

cplx FareyFraction::unit_point() const { return unit_root(p, q); }

std::string FareyFraction::str() const { return std::to_string(p) + "/" + std::to_string(q); }

FareyPair FareyPair::conjugate() const {
  return FareyPair{FareyFraction{hi.q - hi.p, hi.q}, FareyFraction{lo.q - lo.p, lo.q}, order};
}

std::string FareyPair::str() const { return lo.str() + "," + hi.str(); }

FareyPair FareyPair::parse(std::string_view text, std::int64_t order) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw DomainError("expected a/b,c/d, got '" + std::string(text) + "'");
  return make_pair(FareyFraction::parse(text.substr(0, comma)),
                   FareyFraction::parse(text.substr(comma + 1)), order);
}

std::vector<FareyFraction> farey_sequence(std::int64_t n) {
  check_order(n);
  // Next-term recurrence: (a/b, c/d) -> (c/d, (k c - a)/(k d - b)), k = floor((n + b)/d).
  std::vector<FareyFraction> out;
  std::int64_t a = 0, b = 1, c = 1, d = n;
  out.push_back({a, b});
  while (c <= n) {
    out.push_back({c, d});
    if (c == d) break;
    const std::int64_t k = (n + b) / d;
    const std::int64_t nc = k * c - a;
    const std::int64_t nd = k * d - b;
    a = c;
    b = d;
    c = nc;
    d = nd;
  }
  return out;
}

bool are_neighbors(const FareyFraction& a, const FareyFraction& b, std::int64_t n) {
  check_order(n);
  if (!a.is_reduced() || !b.is_reduced())
    throw InvariantViolation("are_neighbors: unreduced fraction " + a.str() + " or " + b.str());
  if (a.q > n || b.q > n)
    throw InvariantViolation("are_neighbors: denominator exceeds order " + std::to_string(n));
  const std::int64_t det = a.p * b.q - a.q * b.p;
  return (det == 1 || det == -1) && a.q + b.q > n;
}

FareyPair make_pair(const FareyFraction& a, const FareyFraction& b, std::int64_t n) {
  if (!are_neighbors(a, b, n))
    throw InvariantViolation(a.str() + " and " + b.str() + " are not Farey neighbors of order " +
                             std::to_string(n));
  return a < b ? FareyPair{a, b, n} : FareyPair{b, a, n};
}

std::vector<FareyPair> upper_half_pairs(std::int64_t n) {
  if (n < 3) throw UnsupportedOrderError("upper_half_pairs requires n >= 3, got " + std::to_string(n));
  const auto seq = farey_sequence(n);
  const FareyFraction half{1, 2};
  std::vector<FareyPair> pairs;
  for (std::size_t i = 0; i + 1 < seq.size() && seq[i + 1] <= half; ++i)
    pairs.push_back({seq[i], seq[i + 1], n});
  return pairs;
}

}  // namespace karc
