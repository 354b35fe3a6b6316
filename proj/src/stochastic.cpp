#include "karc/stochastic.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

#include "karc/errors.hpp"

namespace karc {
namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in [0,1], got " + std::to_string(alpha));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw DomainError("stochastic matrix must be square and nonempty");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!(v >= 0.0)) throw DomainError("stochastic matrix has a negative or NaN entry in row " + std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw DomainError("row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
}

StochasticMatrix StochasticMatrix::read(std::istream& in) {
  int n = 0;
  if (!(in >> n) || n < 1) throw DomainError("matrix file: expected a positive dimension");
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> a(i, j))) throw DomainError("matrix file: expected " + std::to_string(n * n) + " entries");
  return StochasticMatrix(std::move(a));
}

void StochasticMatrix::write(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << size() << '\n';
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) out << (j ? " " : "") << entries_(i, j);
    out << '\n';
  }
  out.precision(precision);
}

StochasticMatrix realize_type0(int n, double alpha) {
  if (n < 1) throw DomainError("realize_type0: n must be positive");
  check_alpha(alpha);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) += 1.0 - alpha;
    a(i, (i + 1) % n) += alpha;
  }
  return StochasticMatrix(std::move(a));
}

StochasticMatrix realize_type1(int q, int s, double alpha) {
  if (!(1 <= q && q < s) || std::gcd(q, s) != 1)
    throw DomainError("realize_type1: need 1 <= q < s with gcd(q, s) = 1");
  check_alpha(alpha);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s, s);
  for (int i = 0; i + 1 < s; ++i) a(i, i + 1) = 1.0;
  a(s - 1, 0) = alpha;
  a(s - 1, s - q) += 1.0 - alpha;
  return StochasticMatrix(std::move(a));
}

std::vector<double> char_poly(const Eigen::MatrixXd& a) {
  const auto n = static_cast<int>(a.rows());
  if (n != a.cols()) throw DomainError("char_poly: matrix must be square");
  if (n > 64) throw DomainError("char_poly: dimension above 64");
  if (n == 0) return {1.0};
  const Eigen::MatrixXd h = Eigen::HessenbergDecomposition<Eigen::MatrixXd>(a).matrixH();

  // p_k(t) = (t - h_kk) p_{k-1}(t) - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}(t)
  std::vector<std::vector<double>> p(static_cast<std::size_t>(n) + 1);
  p[0] = {1.0};
  for (int k = 1; k <= n; ++k) {
    std::vector<double> pk(static_cast<std::size_t>(k) + 1, 0.0);
    const auto& prev = p[k - 1];
    for (std::size_t c = 0; c < prev.size(); ++c) {
      pk[c + 1] += prev[c];
      pk[c] -= h(k - 1, k - 1) * prev[c];
    }
    double sub = 1.0;
    for (int i = k - 1; i >= 1; --i) {
      sub *= h(i, i - 1);
      const double factor = h(i - 1, k - 1) * sub;
      if (factor == 0.0) continue;
      const auto& pi = p[i - 1];
      for (std::size_t c = 0; c < pi.size(); ++c) pk[c] -= factor * pi[c];
    }
    p[k] = std::move(pk);
  }
  return p[n];
}

RootSet spectrum(const StochasticMatrix& a) {
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(a.entries(), false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("spectrum: eigenvalue iteration did not converge", {});
  RootSet out;
  const auto& ev = solver.eigenvalues();
  out.roots.assign(ev.data(), ev.data() + ev.size());

  const auto coeffs = char_poly(a);
  double max_coeff = 0.0;
  for (double c : coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  for (const auto& r : out.roots) {
    const double scale = max_coeff * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(a.size()));
    out.residual_bound = std::max(out.residual_bound, std::abs(horner(std::span<const double>(coeffs), r).value) / scale);
  }
  return out;
}

StochasticMatrix random_stochastic(int n, std::mt19937_64& rng) {
  if (n < 1) throw DomainError("random_stochastic: n must be positive");
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      a(i, j) = -std::log1p(-uniform01(rng));
      sum += a(i, j);
    }
    if (sum == 0.0) {
      a.row(i).setConstant(1.0 / n);
      continue;
    }
    a.row(i) /= sum;
    // Push the rounding residue into the largest entry so the row sums to 1.
    Eigen::Index jmax = 0;
    a.row(i).maxCoeff(&jmax);
    a(i, jmax) += 1.0 - a.row(i).sum();
  }
  return StochasticMatrix(std::move(a));
}

StochasticMatrix random_stochastic(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_stochastic(n, rng);
}

DigraphFlags analyze_digraph(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  DigraphFlags flags;
  if (n == 0) return flags;

  auto reach_all = [&](bool reverse) {
    std::vector<char> seen(n, 0);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = 1;
    while (!todo.empty()) {
      const int u = todo.front();
      todo.pop();
      for (int v = 0; v < n; ++v) {
        const bool edge = reverse ? adj[v][u] : adj[u][v];
        if (edge && !seen[v]) {
          seen[v] = 1;
          todo.push(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  flags.irreducible = reach_all(false) && reach_all(true);
  if (!flags.irreducible) {
    flags.state = Primitivity::Imprimitive;
    return flags;
  }

  // BFS levels; the period is gcd over arcs u -> v of level[u] + 1 - level[v].
  std::vector<int> level(n, -1);
  std::queue<int> todo;
  level[0] = 0;
  todo.push(0);
  while (!todo.empty()) {
    const int u = todo.front();
    todo.pop();
    for (int v = 0; v < n; ++v)
      if (adj[u][v] && level[v] < 0) {
        level[v] = level[u] + 1;
        todo.push(v);
      }
  }
  int g = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (adj[u][v]) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));

  if (g == 0) {  // single vertex without a loop: no closed walks
    flags.state = Primitivity::Undefined;
    return flags;
  }
  flags.period = g;
  flags.primitive = g == 1;
  flags.state = g == 1 ? Primitivity::Primitive : Primitivity::Imprimitive;
  return flags;
}

DigraphFlags digraph_flags(const StochasticMatrix& a) {
  const int n = a.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj[i][j] = a(i, j) > 0.0;
  return analyze_digraph(adj);
}

int positive_power_exponent(const StochasticMatrix& a, int cap) {
  // Boolean powers of the pattern avoid underflow in tiny products.
  const int n = a.size();
  Eigen::MatrixXi pattern(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pattern(i, j) = a(i, j) > 0.0 ? 1 : 0;
  Eigen::MatrixXi power = pattern;
  for (int m = 1; m <= cap; ++m) {
    if ((power.array() > 0).all()) return m;
    power = ((power * pattern).array() > 0).cast<int>();
  }
  return 0;
}

}  // namespace karc
