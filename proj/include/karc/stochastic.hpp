#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "karc/root_engine.hpp"

namespace karc {

/// Dense row-stochastic matrix: entries >= 0, every row sums to 1 within 1e-12.
class StochasticMatrix {
 public:
  static constexpr double kRowSumTol = 1e-12;

  /// Validates the stochastic invariants; throws DomainError otherwise.
  explicit StochasticMatrix(Eigen::MatrixXd entries);

  [[nodiscard]] int size() const { return static_cast<int>(entries_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& entries() const { return entries_; }
  [[nodiscard]] double operator()(int i, int j) const { return entries_(i, j); }

  /// Text form: first line n, then n rows of n decimal entries.
  static StochasticMatrix read(std::istream& in);
  void write(std::ostream& out) const;

 private:
  Eigen::MatrixXd entries_;
};

/// beta I + alpha C with C the cyclic shift; characteristic polynomial (t - beta)^n - alpha^n.
StochasticMatrix realize_type0(int n, double alpha);

/// Companion matrix of t^s - beta t^(s-q) - alpha (ones on the superdiagonal,
/// last row alpha at column 0 and beta at column s - q).
StochasticMatrix realize_type1(int q, int s, double alpha);

/// Monic characteristic polynomial, ascending coefficients (Hessenberg reduction
/// followed by the determinant recurrence).
std::vector<double> char_poly(const Eigen::MatrixXd& a);
inline std::vector<double> char_poly(const StochasticMatrix& a) { return char_poly(a.entries()); }

/// All eigenvalues, with residual_bound measured against char_poly.
RootSet spectrum(const StochasticMatrix& a);

/// Rows drawn uniformly from the probability simplex (normalized exponentials).
StochasticMatrix random_stochastic(int n, std::mt19937_64& rng);
StochasticMatrix random_stochastic(int n, std::uint64_t seed);

enum class Primitivity { Primitive, Imprimitive, Undefined };

struct DigraphFlags {
  bool irreducible = false;
  bool primitive = false;
  Primitivity state = Primitivity::Undefined;
  int period = 0;  ///< gcd of closed-walk lengths; 0 when undefined or reducible
};

/// Flags of the digraph with adjacency `adj` (adj[i][j] means an arc i -> j).
DigraphFlags analyze_digraph(const std::vector<std::vector<bool>>& adj);
/// Flags of the positive-entry digraph of `a`.
DigraphFlags digraph_flags(const StochasticMatrix& a);

/// Smallest m <= cap with A^m entrywise positive, or 0 if none.
int positive_power_exponent(const StochasticMatrix& a, int cap);

}  // namespace karc
