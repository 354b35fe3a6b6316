#pragma once

#include <functional>
#include <span>
#include <vector>

#include "karc/polynomial.hpp"

namespace karc {

/// Tolerances and caps of the root engine. Defaults are the values every
/// test and the CLI rely on.
struct RootEngineConfig {
  int max_iterations = 500;           ///< simultaneous-iteration cap in all_roots
  int newton_restarts = 8;            ///< perturbed Newton starts per bad root in the fallback
  double residual_target = 1e-10;     ///< required RootSet::residual_bound
  int polish_iterations = 200;        ///< factored-form correction sweeps per grid point
  int initial_intervals = 64;         ///< uniform initial alpha grid: 0, 1/64, ..., 1
  std::size_t max_grid_points = 1u << 16;
  double guard_floor = 1e-3;          ///< absolute floor of the path-separation guard
  double cluster_tol = 1e-6;          ///< roots closer than this count as one multiple root
};

/// All roots of a polynomial (with multiplicity).
struct RootSet {
  std::vector<cplx> roots;
  /// max_k |P(r_k)| / (max|a_i| * max(1, |r_k|)^deg)
  double residual_bound = 0.0;
};

/// Roots of the ascending coefficient vector. Exact trailing zeros are returned
/// as exact zero roots; the rest come from Aberth-Ehrlich iteration with a
/// perturbed-Newton fallback.
RootSet all_roots(std::span<const cplx> coeffs, const RootEngineConfig& config = {});
RootSet all_roots(std::span<const double> coeffs, const RootEngineConfig& config = {});

/// A one-parameter polynomial family on alpha in [0, 1] of constant degree.
struct PolynomialFamily {
  int degree = 0;
  std::function<std::vector<cplx>(double)> coefficients;
  /// Optional accurate evaluator (e.g. factored form); Horner on `coefficients` otherwise.
  std::function<ValueAndDerivative(double, cplx)> evaluate;
};

/// Root paths over an alpha grid: paths[k][j] is path k at grid[j].
struct RootPaths {
  std::vector<double> grid;
  std::vector<std::vector<cplx>> paths;
  /// Largest single-step displacement of any path.
  double matching_quality = 0.0;
};

struct TrackOptions {
  /// Paths that start within cluster_tol of one of these points are guarded;
  /// empty means every path is guarded.
  std::vector<cplx> watch;
};

/// Continues every root of `family` along `grid` (must start at 0, end at 1, be
/// strictly increasing). Midpoints are inserted where the separation guard fails;
/// throws PathAmbiguityError when the grid cap is reached first.
RootPaths track_paths(const PolynomialFamily& family, std::vector<double> grid,
                      const RootEngineConfig& config = {}, const TrackOptions& options = {});

/// Uniform grid with `intervals` steps on [0, 1].
std::vector<double> uniform_grid(int intervals);

/// Simultaneous (Aberth) correction of a full root set using an accurate evaluator.
void polish_roots(std::vector<cplx>& roots,
                  const std::function<ValueAndDerivative(cplx)>& evaluate, int iterations);

/// Minimum-weight perfect matching; result[i] is the column assigned to row i.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace karc
