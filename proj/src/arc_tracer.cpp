#include "karc/arc_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "karc/errors.hpp"

namespace karc {
namespace {

std::vector<double> working_grid(const TraceConfig& config) {
  return config.initial_grid.empty() ? uniform_grid(config.engine.initial_intervals)
                                     : config.initial_grid;
}

std::string fmt_alpha(double alpha) {
  std::ostringstream out;
  out.precision(17);
  out << alpha;
  return out.str();
}

/// Follows root paths from the start point, switching only where two paths
/// meet (distance <= cluster_tol), and returns the switch-minimal route whose
/// last value is nearest `end`.
std::vector<cplx> select_route(const RootPaths& rp, cplx start, cplx end, double select_tol,
                               double cluster_tol, int& switches) {
  const std::size_t count = rp.paths.size();
  const std::size_t length = rp.grid.size();
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<std::vector<int>> cost(length, std::vector<int>(count, kUnreached));
  std::vector<std::vector<int>> via(length, std::vector<int>(count, -1));

  for (std::size_t k = 0; k < count; ++k) {
    if (std::abs(rp.paths[k][0] - start) <= select_tol) {
      cost[0][k] = 0;
      via[0][k] = static_cast<int>(k);
    }
  }
  if (std::none_of(cost[0].begin(), cost[0].end(), [](int c) { return c == 0; }))
    throw ArcIdentificationError("no root path starts within tolerance of the arc's alpha = 0 point");

  for (std::size_t j = 1; j < length; ++j) {
    for (std::size_t k = 0; k < count; ++k) {
      if (cost[j - 1][k] != kUnreached) {
        cost[j][k] = cost[j - 1][k];
        via[j][k] = static_cast<int>(k);
      }
    }
    const std::vector<int> carried = cost[j];
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t k2 = 0; k2 < count; ++k2) {
        if (k2 == k || carried[k2] == kUnreached) continue;
        if (std::abs(rp.paths[k][j] - rp.paths[k2][j]) > cluster_tol) continue;
        if (carried[k2] + 1 < cost[j][k]) {
          cost[j][k] = carried[k2] + 1;
          via[j][k] = static_cast<int>(k2);
        }
      }
    }
  }

  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    if (cost[length - 1][k] == kUnreached) continue;
    const double dist = std::abs(rp.paths[k][length - 1] - end);
    // Coincident ends are tied; prefer fewer switches.
    const bool tie = std::abs(dist - best_dist) <= cluster_tol;
    if (best < 0 || (!tie && dist < best_dist) ||
        (tie && cost[length - 1][k] < cost[length - 1][static_cast<std::size_t>(best)])) {
      best = static_cast<int>(k);
      best_dist = std::min(dist, best_dist);
    }
  }

  std::vector<cplx> route(length);
  switches = 0;
  auto k = static_cast<std::size_t>(best);
  for (std::size_t j = length; j-- > 0;) {
    route[j] = rp.paths[k][j];
    const auto prev = static_cast<std::size_t>(via[j][k]);
    if (prev != k) ++switches;
    k = prev;
  }
  return route;
}

bool is_interior(double alpha) { return alpha > 0.0 && alpha < 1.0; }

}  // namespace

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Traced: return "Traced";
    case Provenance::Power: return "Power";
    case Provenance::Conjugate: return "Conjugate";
    case Provenance::Segment: return "Segment";
  }
  return "?";
}

std::string to_string(ParameterMap map) {
  return map == ParameterMap::Identity ? "gamma=alpha" : "gamma=1-alpha";
}

double turn_near(cplx z, double reference) {
  const double turn = std::atan2(z.imag(), z.real()) / (2.0 * std::numbers::pi);
  return turn + std::round(reference - turn);
}

ArcReport check_arc(const KArc& arc, const TraceConfig& config) {
  ArcReport report;
  if (arc.samples.empty()) return report;
  const auto& poly = arc.poly;
  report.start_error = std::abs(arc.samples.front().lambda - poly.start_point());
  report.end_error = std::abs(arc.samples.back().lambda - poly.end_point());

  const double lo = arc.sector_min().value();
  const double hi = arc.sector_max().value();
  const double mid = 0.5 * (lo + hi);
  report.max_sector_excess = -std::numeric_limits<double>::infinity();
  for (const auto& [alpha, lambda] : arc.samples) {
    const double modulus = std::abs(lambda);
    report.max_modulus = std::max(report.max_modulus, modulus);
    if (is_interior(alpha)) report.max_interior_modulus = std::max(report.max_interior_modulus, modulus);

    const double turn = turn_near(lambda, mid);
    const double excess = std::max(lo - turn, turn - hi);
    if (excess > report.max_sector_excess) {
      report.max_sector_excess = excess;
      report.sector_excess_alpha = alpha;
    }
    report.max_reduced_residual =
        std::max(report.max_reduced_residual, std::abs(eval_reduced(poly, alpha, lambda)));
    report.max_full_residual =
        std::max(report.max_full_residual, std::abs(eval_full_ito(poly.pair, poly.n, alpha, lambda)));
  }

  report.endpoints_ok = arc.samples.front().alpha == 0.0 && arc.samples.back().alpha == 1.0 &&
                        report.start_error <= config.endpoint_tol &&
                        report.end_error <= config.endpoint_tol;
  report.sector_ok = report.max_sector_excess <= config.sector_tol;
  report.modulus_ok = report.max_modulus <= 1.0 + 1e-9;
  if (poly.type == ItoType::TypeI) report.modulus_ok = report.modulus_ok && report.max_interior_modulus < 1.0;
  report.residual_ok = report.max_reduced_residual <= config.residual_tol &&
                       report.max_full_residual <= config.residual_tol;
  return report;
}

KArc trace_type0(std::int64_t n, const std::vector<double>& grid) {
  if (n < 3) throw UnsupportedOrderError("trace_type0 requires n >= 3");
  KArc arc;
  arc.poly = classify(FareyPair{FareyFraction{0, 1}, FareyFraction{1, n}, n}, n);
  arc.provenance = Provenance::Segment;
  const cplx omega = unit_root(1, n);
  arc.samples.reserve(grid.size());
  for (double alpha : grid) arc.samples.push_back({alpha, (1.0 - alpha) + alpha * omega});
  return arc;
}

KArc trace_type0(std::int64_t n, const TraceConfig& config) {
  return trace_type0(n, working_grid(config));
}

KArc trace_arc(const ItoPolynomial& poly, const TraceConfig& config) {
  if (poly.type == ItoType::Type0) throw PreconditionError("trace_arc: use trace_type0 for Type 0");

  PolynomialFamily family;
  family.degree = poly.degree();
  family.coefficients = [poly](double alpha) {
    const auto real = reduced_coefficients(poly, alpha);
    return std::vector<cplx>(real.begin(), real.end());
  };
  family.evaluate = [poly](double alpha, cplx t) {
    return eval_reduced_with_derivative(poly, alpha, t);
  };

  TrackOptions options;
  options.watch = {poly.start_point()};
  const RootPaths rp = track_paths(family, working_grid(config), config.engine, options);

  KArc arc;
  arc.poly = poly;
  arc.provenance = Provenance::Traced;
  arc.heuristic = poly.type != ItoType::TypeI;
  const auto route = select_route(rp, poly.start_point(), poly.end_point(), config.select_tol,
                                  config.engine.cluster_tol, arc.path_switches);
  arc.samples.reserve(route.size());
  for (std::size_t j = 0; j < route.size(); ++j) arc.samples.push_back({rp.grid[j], route[j]});

  if (std::abs(route.back() - poly.end_point()) > config.select_tol)
    throw ArcIdentificationError("arc " + arc.id() + " (" + to_string(poly.type) +
                                 "): root path from the alpha = 0 point ends elsewhere");

  const auto report = check_arc(arc, config);
  if (!report.sector_ok && poly.n > 3)
    throw SectorViolationError("arc " + arc.id() + " leaves its sector at alpha = " +
                                   fmt_alpha(report.sector_excess_alpha),
                               report.sector_excess_alpha);
  return arc;
}

std::optional<ForbiddenRayHit> forbidden_ray_violation(const KArc& arc, double angular_tol) {
  if (arc.poly.type != ItoType::TypeI) throw PreconditionError("forbidden_ray_violation: Type I arcs only");
  for (const auto& [alpha, lambda] : arc.samples) {
    if (!is_interior(alpha)) continue;
    const double theta = std::atan2(lambda.imag(), lambda.real());
    for (const std::int64_t den : {arc.poly.s, arc.poly.q}) {
      const double step = std::numbers::pi / static_cast<double>(den);
      const auto k = static_cast<std::int64_t>(std::llround(theta / step));
      if (k % den == 0) continue;  // real ray: not forbidden
      if (std::abs(theta - static_cast<double>(k) * step) < angular_tol)
        return ForbiddenRayHit{alpha, lambda, k, den};
    }
  }
  return std::nullopt;
}

bool simplicity_check(const KArc& arc, double floor) {
  const auto& s = arc.samples;
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s[a].lambda.real() < s[b].lambda.real(); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& a = s[order[i]];
      const auto& b = s[order[j]];
      if (b.lambda.real() - a.lambda.real() > floor) break;
      if (a.alpha != b.alpha && std::abs(a.lambda - b.lambda) <= floor) return false;
    }
  }
  return true;
}

FareyPair power_pair(std::int64_t d, std::int64_t m, std::int64_t n, PowerCase which) {
  if (!(1 < d && d < m && m <= n))
    throw NotAPowerPairError("power_pair: need 1 < d < m <= n");
  const std::int64_t base = which == PowerCase::I ? m : m - 1;
  if (base % d != 0)
    throw NotAPowerPairError("power_pair: d = " + std::to_string(d) + " does not divide " +
                             std::to_string(base));
  const std::int64_t k = base / d;
  if (!(n < m + k - 1))
    throw NotAPowerPairError("power_pair: n = " + std::to_string(n) + " is not below m + k - 1 = " +
                             std::to_string(m + k - 1));
  const FareyFraction a = which == PowerCase::I ? FareyFraction::make(1, k) : FareyFraction::make(d, m);
  const FareyFraction b = which == PowerCase::I ? FareyFraction::make(d, m - 1) : FareyFraction::make(1, k);
  if (!are_neighbors(FareyFraction{1, m}, FareyFraction{1, m - 1}, n) || !are_neighbors(a, b, n))
    throw NotAPowerPairError("power_pair: not Farey pairs of order " + std::to_string(n));
  return make_pair(a, b, n);
}

KArc pointwise_power(const KArc& base, int exponent, ParameterMap map, const FareyPair& target,
                     const std::string& rule, const TraceConfig& config) {
  KArc arc;
  arc.poly = classify(target, base.poly.n);
  arc.provenance = Provenance::Power;
  arc.power = PowerOrigin{base.id(), exponent, map, false, rule};
  arc.base_id = base.id();
  arc.samples.reserve(base.samples.size());
  if (map == ParameterMap::Identity) {
    for (const auto& [alpha, lambda] : base.samples) arc.samples.push_back({alpha, ipow(lambda, exponent)});
  } else {
    for (auto it = base.samples.rbegin(); it != base.samples.rend(); ++it)
      arc.samples.push_back({1.0 - it->alpha, ipow(it->lambda, exponent)});
  }

  const auto report = check_arc(arc, config);
  if (!report.endpoints_ok)
    throw PowerMapError("power arc " + arc.id() + " from " + base.id() + ": endpoints do not match (" +
                        std::to_string(report.start_error) + ", " + std::to_string(report.end_error) + ")");
  if (!report.sector_ok)
    throw SectorViolationError("power arc " + arc.id() + " leaves its sector at alpha = " +
                                   fmt_alpha(report.sector_excess_alpha),
                               report.sector_excess_alpha);
  return arc;
}

KArc power_arc(const KArc& base, int d, PowerCase which, const TraceConfig& config) {
  const auto& bp = base.poly;
  if (bp.type != ItoType::TypeI || bp.p != 1 || bp.r != 1 || bp.s != bp.q + 1)
    throw PreconditionError("power_arc: base must be the Type I arc of (1/m, 1/(m-1))");
  const FareyPair target = power_pair(d, bp.s, bp.n, which);
  return pointwise_power(base, d, which == PowerCase::I ? ParameterMap::Reversed : ParameterMap::Identity,
                         target, which == PowerCase::I ? "power-i" : "power-ii", config);
}

KArc conjugate_arc(const KArc& base) {
  KArc arc;
  arc.poly = classify(base.poly.pair.conjugate(), base.poly.n);
  arc.provenance = Provenance::Conjugate;
  arc.base_id = base.id();
  arc.heuristic = base.heuristic;
  arc.samples.reserve(base.samples.size());
  for (const auto& [alpha, lambda] : base.samples) arc.samples.push_back({alpha, std::conj(lambda)});
  return arc;
}

}  // namespace karc
