#include "karc/root_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "karc/errors.hpp"

namespace karc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double residual_ratio(std::span<const cplx> coeffs, cplx r) {
  double max_coeff = 0.0;
  for (const auto& c : coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  const auto degree = static_cast<double>(coeffs.size() - 1);
  const double scale = max_coeff * std::pow(std::max(1.0, std::abs(r)), degree);
  return std::abs(horner(coeffs, r).value) / scale;
}

/// Aberth correction of root k against the others; returns the step.
cplx aberth_step(const std::vector<cplx>& z, std::size_t k, cplx value, cplx deriv) {
  if (deriv == cplx{0.0, 0.0}) return {0.0, 0.0};
  const cplx ratio = value / deriv;
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j == k || z[j] == z[k]) continue;
    sum += 1.0 / (z[k] - z[j]);
  }
  const cplx w = ratio / (1.0 - ratio * sum);
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return ratio;
  return w;
}

cplx newton_from(std::span<const cplx> coeffs, cplx z, int iterations) {
  for (int it = 0; it < iterations; ++it) {
    const auto [v, dv] = horner(coeffs, z);
    if (v == cplx{0.0, 0.0} || dv == cplx{0.0, 0.0}) break;
    const cplx step = v / dv;
    z -= step;
    if (std::abs(step) <= 4.0 * kEps * std::abs(z)) break;
  }
  return z;
}

}  // namespace

RootSet all_roots(std::span<const cplx> coeffs, const RootEngineConfig& config) {
  if (coeffs.size() < 2) throw DegeneratePolynomialError("all_roots: degree must be at least 1");
  if (coeffs.back() == cplx{0.0, 0.0})
    throw DegeneratePolynomialError("all_roots: zero leading coefficient");

  std::size_t zeros = 0;
  while (coeffs[zeros] == cplx{0.0, 0.0}) ++zeros;
  const std::span<const cplx> core = coeffs.subspan(zeros);
  const std::size_t degree = core.size() - 1;

  RootSet out;
  out.roots.assign(zeros, cplx{0.0, 0.0});
  if (degree == 0) return out;

  std::vector<cplx> z(degree);
  if (degree == 1) {
    z[0] = -core[0] / core[1];
  } else {
    // Start on a circle of the geometric-mean root radius, rotated off the axes.
    const double radius =
        std::pow(std::abs(core.front()) / std::abs(core.back()), 1.0 / static_cast<double>(degree));
    for (std::size_t k = 0; k < degree; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + 0.4;
      z[k] = std::polar(radius, theta);
    }
    std::vector<char> done(degree, 0);
    for (int it = 0; it < config.max_iterations; ++it) {
      bool all_done = true;
      for (std::size_t k = 0; k < degree; ++k) {
        if (done[k]) continue;
        const auto [v, dv] = horner(core, z[k]);
        const double noise = 8.0 * kEps * horner_magnitude(core, std::abs(z[k]));
        if (std::abs(v) <= noise) {
          done[k] = 1;
          continue;
        }
        all_done = false;
        const cplx w = aberth_step(z, k, v, dv);
        z[k] -= w;
        if (std::abs(w) <= kEps * std::abs(z[k])) done[k] = 1;
      }
      if (all_done) break;
    }
    // One final sweep of plain Newton tightens simple roots after the noise stop.
    for (auto& root : z) {
      const cplx refined = newton_from(core, root, 2);
      if (std::abs(horner(core, refined).value) <= std::abs(horner(core, root).value)) root = refined;
    }
  }

  out.roots.insert(out.roots.end(), z.begin(), z.end());

  // Perturbed-Newton fallback for roots that missed the residual target.
  for (std::size_t k = zeros; k < out.roots.size(); ++k) {
    double best = residual_ratio(coeffs, out.roots[k]);
    if (best <= config.residual_target) continue;
    cplx best_root = out.roots[k];
    for (int attempt = 0; attempt < config.newton_restarts; ++attempt) {
      const double scale = 1e-3 * std::max(1.0, std::abs(best_root)) * (1 + attempt);
      const cplx start = out.roots[k] + std::polar(scale, 0.7 + 2.1 * attempt);
      const cplx candidate = newton_from(coeffs, start, 200);
      const double res = residual_ratio(coeffs, candidate);
      if (res < best) {
        best = res;
        best_root = candidate;
      }
    }
    out.roots[k] = best_root;
  }

  for (const auto& r : out.roots) out.residual_bound = std::max(out.residual_bound, residual_ratio(coeffs, r));
  if (!(out.residual_bound <= config.residual_target)) {
    std::ostringstream msg;
    msg << "all_roots: residual bound " << out.residual_bound << " above target "
        << config.residual_target << " after " << config.max_iterations << " iterations";
    throw ConvergenceFailure(msg.str(), out.roots);
  }
  return out;
}

RootSet all_roots(std::span<const double> coeffs, const RootEngineConfig& config) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  return all_roots(std::span<const cplx>(c), config);
}

void polish_roots(std::vector<cplx>& roots,
                  const std::function<ValueAndDerivative(cplx)>& evaluate, int iterations) {
  std::vector<double> start_residual(roots.size());
  const std::vector<cplx> original = roots;
  for (std::size_t k = 0; k < roots.size(); ++k) start_residual[k] = std::abs(evaluate(roots[k]).value);

  for (int it = 0; it < iterations; ++it) {
    double max_rel = 0.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const auto [v, dv] = evaluate(roots[k]);
      if (v == cplx{0.0, 0.0}) continue;
      const cplx w = aberth_step(roots, k, v, dv);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      roots[k] -= w;
      const double mag = std::abs(roots[k]);
      max_rel = std::max(max_rel, mag > 1e-280 ? std::abs(w) / mag : 0.0);
    }
    if (max_rel <= 2.0 * kEps) break;
  }
  // Never accept a correction that made a root worse.
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double after = std::abs(evaluate(roots[k]).value);
    if (!(after <= 2.0 * start_residual[k] + 1e-300)) roots[k] = original[k];
  }
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  // Hungarian method with potentials, 1-based internally.
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) result[match[j] - 1] = j - 1;
  return result;
}

std::vector<double> uniform_grid(int intervals) {
  if (intervals < 1) throw DomainError("uniform_grid: need at least one interval");
  std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
  for (int j = 0; j <= intervals; ++j) grid[j] = static_cast<double>(j) / intervals;
  grid.back() = 1.0;
  return grid;
}

RootPaths track_paths(const PolynomialFamily& family, std::vector<double> grid,
                      const RootEngineConfig& config, const TrackOptions& options) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw DomainError("track_paths: grid must start at 0 and end at 1");
  for (std::size_t j = 1; j < grid.size(); ++j)
    if (!(grid[j] > grid[j - 1])) throw DomainError("track_paths: grid must be strictly increasing");

  auto solve = [&](double alpha) {
    const auto coeffs = family.coefficients(alpha);
    if (static_cast<int>(coeffs.size()) != family.degree + 1)
      throw DegeneratePolynomialError("track_paths: family degree changed at alpha = " +
                                      std::to_string(alpha));
    auto roots = all_roots(std::span<const cplx>(coeffs), config).roots;
    if (family.evaluate) {
      polish_roots(roots, [&](cplx t) { return family.evaluate(alpha, t); },
                   config.polish_iterations);
    }
    return roots;
  };

  const std::vector<cplx> start = solve(grid.front());
  const std::size_t count = start.size();
  std::vector<char> watched(count, options.watch.empty() ? 1 : 0);
  for (std::size_t k = 0; k < count; ++k)
    for (const auto& w : options.watch)
      if (std::abs(start[k] - w) <= config.cluster_tol) watched[k] = 1;

  RootPaths out;
  out.paths.assign(count, {});
  for (std::size_t k = 0; k < count; ++k) out.paths[k].push_back(start[k]);
  out.grid.push_back(grid.front());

  std::deque<double> pending(grid.begin() + 1, grid.end());
  std::vector<cplx> current = start;
  std::vector<std::vector<double>> cost(count, std::vector<double>(count));
  std::vector<cplx> next(count);
  std::vector<double> disp(count);

  auto guard_holds = [&]() {
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t k = j + 1; k < count; ++k) {
        if (!watched[j] && !watched[k]) continue;
        const double before = std::abs(current[j] - current[k]);
        if (before <= config.cluster_tol) continue;
        if (std::abs(next[j] - next[k]) <= config.cluster_tol) continue;
        const double guard = std::max(0.5 * before, config.guard_floor);
        if (std::max(disp[j], disp[k]) >= guard) return false;
      }
    }
    return true;
  };

  while (!pending.empty()) {
    const double a = out.grid.back();
    const double b = pending.front();
    const std::vector<cplx> fresh = solve(b);
    for (std::size_t k = 0; k < count; ++k)
      for (std::size_t j = 0; j < count; ++j) cost[k][j] = std::norm(current[k] - fresh[j]);
    const auto assign = min_cost_assignment(cost);
    for (std::size_t k = 0; k < count; ++k) {
      next[k] = fresh[static_cast<std::size_t>(assign[k])];
      disp[k] = std::abs(next[k] - current[k]);
    }

    if (guard_holds()) {
      for (std::size_t k = 0; k < count; ++k) {
        out.paths[k].push_back(next[k]);
        out.matching_quality = std::max(out.matching_quality, disp[k]);
      }
      current = next;
      out.grid.push_back(b);
      pending.pop_front();
      continue;
    }

    const double mid = 0.5 * (a + b);
    if (out.grid.size() + pending.size() >= config.max_grid_points || !(mid > a && mid < b)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "track_paths: root paths not separated on alpha in [" << a << ", " << b << "]";
      throw PathAmbiguityError(msg.str(), a, b);
    }
    pending.push_front(mid);
  }
  return out;
}

}  // namespace karc
