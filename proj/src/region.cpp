#include "karc/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "karc/errors.hpp"

namespace karc {
namespace {

constexpr double kMembershipFloor = 1e-12;
constexpr double kCircleBand = 1e-9;

// Runs fn(0..count-1) on a small pool; rethrows the first failure by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double segment_distance(cplx z, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

// Winding number of the closed polyline around z.
int winding_number(const std::vector<cplx>& poly, cplx z) {
  int w = 0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const cplx a = poly[i];
    const cplx b = poly[i + 1];
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross(a, b, z) > 0) ++w;
    } else if (b.imag() <= z.imag() && cross(a, b, z) < 0) {
      --w;
    }
  }
  return w;
}

std::vector<cplx> oriented_points(const KArc& arc) {
  std::vector<cplx> pts;
  pts.reserve(arc.samples.size());
  for (const auto& s : arc.samples) pts.push_back(s.lambda);
  const bool starts_at_lo = FareyFraction{arc.poly.p, arc.poly.q} == arc.poly.pair.lo;
  if (!starts_at_lo) std::reverse(pts.begin(), pts.end());
  return pts;
}

KArc build_power(const PowerRoute& route, const KArc& base, const TraceConfig& config) {
  KArc arc = pointwise_power(base, route.exponent, route.map, route.raw, route.rule, config);
  if (!route.conjugate) return arc;
  KArc conj = conjugate_arc(arc);
  conj.provenance = Provenance::Power;
  conj.power = arc.power;
  conj.power->conjugated = true;
  conj.base_id = base.id();
  if (!check_arc(conj, config).sector_ok)
    throw SectorViolationError("conjugated power arc " + conj.id() + " leaves its sector", 0.0);
  return conj;
}

Shadow trace_shadow(const KArc& power, const TraceConfig& base_config) {
  Shadow shadow;
  shadow.pair_id = power.id();
  TraceConfig config = base_config;
  config.initial_grid.clear();
  for (const auto& s : power.samples) config.initial_grid.push_back(s.alpha);
  try {
    KArc direct = trace_arc(power.poly, config);
    std::map<double, cplx> by_alpha;
    for (const auto& s : direct.samples) by_alpha.emplace(s.alpha, s.lambda);
    for (const auto& s : power.samples) {
      const auto it = by_alpha.find(s.alpha);
      if (it == by_alpha.end()) throw InternalInconsistency("shadow grid lost alpha point");
      shadow.max_deviation = std::max(shadow.max_deviation, std::abs(it->second - s.lambda));
    }
    shadow.arc = std::move(direct);
  } catch (const std::exception& e) {
    shadow.error = e.what();
  }
  return shadow;
}

}  // namespace

std::vector<ArcPlan> plan_upper_arcs(std::int64_t n) {
  const auto pairs = upper_half_pairs(n);
  std::vector<ArcPlan> plans;
  std::map<std::string, std::size_t> index;
  for (const auto& pair : pairs) {
    index.emplace(pair.str(), plans.size());
    plans.push_back({pair, classify(pair, n).type, std::nullopt});
  }

  auto offer = [&](const FareyPair& base, const FareyPair& raw, int exponent, ParameterMap map,
                   const std::string& rule) {
    if (classify(base, n).type != ItoType::TypeI) return;
    const bool conj = raw.hi.p * 2 > raw.hi.q;
    const FareyPair upper = conj ? raw.conjugate() : raw;
    const auto it = index.find(upper.str());
    if (it == index.end()) return;
    auto& plan = plans[it->second];
    if (plan.route || (plan.type != ItoType::TypeII && plan.type != ItoType::TypeIII)) return;
    plan.route = PowerRoute{base, raw, exponent, map, conj, rule};
  };

  for (std::int64_t m = 3; m <= n; ++m) {
    const FareyFraction a{1, m};
    const FareyFraction b{1, m - 1};
    if (!are_neighbors(a, b, n)) continue;
    const FareyPair base = make_pair(a, b, n);
    for (std::int64_t d = 2; d < m; ++d) {
      for (const auto which : {PowerCase::I, PowerCase::II}) {
        try {
          const FareyPair raw = power_pair(d, m, n, which);
          offer(base, raw, static_cast<int>(d),
                which == PowerCase::I ? ParameterMap::Reversed : ParameterMap::Identity,
                which == PowerCase::I ? "power-i" : "power-ii");
        } catch (const NotAPowerPairError&) {
        }
      }
    }
  }

  // n = 4l: squaring the pair ((2l-1)/n, l/(2l+1)) and conjugating reaches (1/(2l+1), 1/(2l)).
  if (n % 4 == 0) {
    const std::int64_t l = n / 4;
    const FareyFraction a = FareyFraction::make(2 * l - 1, n);
    const FareyFraction b = FareyFraction::make(l, 2 * l + 1);
    if (a.is_reduced() && are_neighbors(a, b, n)) {
      const FareyFraction ra = FareyFraction::make(2 * l - 1, 2 * l);
      const FareyFraction rb = FareyFraction::make(2 * l, 2 * l + 1);
      if (are_neighbors(ra, rb, n))
        offer(make_pair(a, b, n), make_pair(ra, rb, n), 2, ParameterMap::Reversed, "square-4l");
    }
  }
  return plans;
}

const KArc* Region::find_arc(const std::string& id) const {
  for (const auto& a : arcs)
    if (a.id() == id) return &a;
  return nullptr;
}

const Shadow* Region::find_shadow(const std::string& id) const {
  for (const auto& s : shadows)
    if (s.pair_id == id) return &s;
  return nullptr;
}

std::vector<ArcOutcome> build_upper_arcs(std::int64_t n, const RegionConfig& config,
                                         const std::optional<FareyPair>& only) {
  const auto plans = plan_upper_arcs(n);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < plans.size(); ++i) index.emplace(plans[i].pair.str(), i);

  std::vector<char> wanted(plans.size(), only ? 0 : 1);
  if (only) {
    const auto it = index.find(only->str());
    if (it == index.end()) throw NotFoundError(only->str() + " is not an upper-half pair of F_" + std::to_string(n));
    wanted[it->second] = 1;
    if (const auto& route = plans[it->second].route) wanted[index.at(route->base.str())] = 1;
  }

  std::vector<ArcOutcome> outcomes(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) outcomes[i].plan = plans[i];

  // Direct traces first: they include every power base.
  std::vector<std::size_t> direct;
  for (std::size_t i = 0; i < plans.size(); ++i)
    if (wanted[i] && !plans[i].route) direct.push_back(i);
  parallel_for(direct.size(), config.threads, [&](std::size_t k) {
    auto& out = outcomes[direct[k]];
    try {
      out.arc = out.plan.type == ItoType::Type0 ? trace_type0(n, config.trace)
                                                : trace_arc(classify(out.plan.pair, n), config.trace);
    } catch (const std::exception& e) {
      out.error = e.what();
      out.cause = std::current_exception();
    }
  });

  std::vector<std::size_t> powered;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (!wanted[i] || !plans[i].route) continue;
    powered.push_back(i);
    auto& out = outcomes[i];
    try {
      const auto& route = *plans[i].route;
      const auto& base = outcomes[index.at(route.base.str())];
      if (!base.arc) throw InternalInconsistency("power base " + route.base.str() + " failed: " + base.error);
      out.arc = build_power(route, *base.arc, config.trace);
    } catch (const std::exception& e) {
      out.error = e.what();
      out.cause = std::current_exception();
    }
  }

  if (config.shadows) {
    parallel_for(powered.size(), config.threads, [&](std::size_t k) {
      auto& out = outcomes[powered[k]];
      if (out.arc) out.shadow = trace_shadow(*out.arc, config.trace);
    });
  }

  if (only) return {outcomes[index.at(only->str())]};
  return outcomes;
}

Region build_region(std::int64_t n, const RegionConfig& config) {
  if (n < 3) throw UnsupportedOrderError("build_region requires n >= 3, got " + std::to_string(n));
  auto outcomes = build_upper_arcs(n, config);
  for (const auto& out : outcomes)
    if (!out.arc) throw ArcConstructionError(out.plan.pair.str(), out.error, out.cause);

  Region region;
  region.n = n;
  region.weld_tol = config.weld_tol;
  for (auto& out : outcomes) {
    if (out.shadow) region.shadows.push_back(std::move(*out.shadow));
    region.arcs.push_back(std::move(*out.arc));
  }
  region.upper_count = region.arcs.size();
  for (std::size_t k = region.upper_count; k-- > 0;) region.arcs.push_back(conjugate_arc(region.arcs[k]));

  auto& boundary = region.boundary;
  for (const auto& arc : region.arcs) {
    auto pts = oriented_points(arc);
    if (boundary.empty()) {
      region.arc_offsets.push_back(0);
      boundary = std::move(pts);
      continue;
    }
    const double gap = std::abs(boundary.back() - pts.front());
    if (gap > config.weld_tol)
      throw InvariantViolation("arc " + arc.id() + " misses the previous arc's endpoint by " + std::to_string(gap));
    boundary.back() = 0.5 * (boundary.back() + pts.front());
    region.arc_offsets.push_back(boundary.size() - 1);
    boundary.insert(boundary.end(), pts.begin() + 1, pts.end());
  }
  const double gap = std::abs(boundary.back() - boundary.front());
  if (gap > config.weld_tol)
    throw InvariantViolation("boundary does not close: gap " + std::to_string(gap));
  boundary.front() = 0.5 * (boundary.back() + boundary.front());
  boundary.back() = boundary.front();

  region.resolution = std::numeric_limits<double>::infinity();
  region.inner_radius = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < boundary.size(); ++i) {
    const double step = std::abs(boundary[i + 1] - boundary[i]);
    if (step > 0.0) region.resolution = std::min(region.resolution, step);
    region.inner_radius = std::min(region.inner_radius, segment_distance(0.0, boundary[i], boundary[i + 1]));
  }
  if (winding_number(boundary, 0.0) == 0) region.inner_radius = 0.0;
  return region;
}

double boundary_distance(const Region& region, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  const auto& b = region.boundary;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) best = std::min(best, segment_distance(z, b[i], b[i + 1]));
  return best;
}

bool contains(const Region& region, cplx z, double tol) {
  const double r = std::abs(z);
  if (r < region.inner_radius) return true;
  if (r > 1.0 + kCircleBand + tol) return false;
  if (boundary_distance(region, z) <= tol + kMembershipFloor) return true;
  return winding_number(region.boundary, z) != 0;
}

std::string to_string(Location location) {
  switch (location) {
    case Location::Inside: return "inside";
    case Location::Boundary: return "boundary";
    case Location::Outside: return "outside";
  }
  return "?";
}

Location locate(const Region& region, cplx z, double boundary_tol) {
  if (boundary_distance(region, z) <= boundary_tol + kMembershipFloor) return Location::Boundary;
  return winding_number(region.boundary, z) != 0 ? Location::Inside : Location::Outside;
}

RegionReport check_region(const Region& region, const TraceConfig& config) {
  RegionReport rep;
  const auto& b = region.boundary;
  rep.closed = b.size() > 3 && b.front() == b.back();
  if (!rep.closed) rep.failures.push_back("boundary is not closed");

  const auto fractions = farey_sequence(region.n);
  rep.circular_order = region.arc_offsets.size() + 1 == fractions.size();
  for (std::size_t k = 0; rep.circular_order && k < region.arc_offsets.size(); ++k) {
    if (std::abs(b[region.arc_offsets[k]] - fractions[k].unit_point()) > config.endpoint_tol) {
      rep.circular_order = false;
      rep.failures.push_back("arc " + std::to_string(k) + " does not start at " + fractions[k].str());
    }
  }
  if (region.arc_offsets.size() + 1 != fractions.size()) rep.failures.push_back("arc count does not match F_n");

  std::vector<std::size_t> endpoint_index(region.arc_offsets.begin(), region.arc_offsets.end());
  endpoint_index.push_back(b.size() - 1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double m = std::abs(b[i]);
    rep.max_modulus = std::max(rep.max_modulus, m);
    if (m >= 1.0 - kCircleBand) ++rep.circle_touches;
  }
  rep.unit_disc = rep.max_modulus <= 1.0 + kCircleBand;
  if (!rep.unit_disc) rep.failures.push_back("boundary leaves the unit disc");
  std::size_t endpoint_touches = 0;
  for (std::size_t i : endpoint_index)
    if (std::abs(b[i]) >= 1.0 - kCircleBand) ++endpoint_touches;
  rep.circle_touches_endpoints = endpoint_touches == endpoint_index.size() && rep.circle_touches == endpoint_touches;
  if (!rep.circle_touches_endpoints) rep.failures.push_back("unit circle touched away from Farey points");

  std::vector<cplx> sorted(b.begin(), b.end());
  std::sort(sorted.begin(), sorted.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  const double window = 1e-9;
  for (cplx z : b) {
    const cplx c = std::conj(z);
    auto it = std::lower_bound(sorted.begin(), sorted.end(), c.real() - window,
                               [](cplx x, double v) { return x.real() < v; });
    double best = std::numeric_limits<double>::infinity();
    for (; it != sorted.end() && it->real() <= c.real() + window; ++it) best = std::min(best, std::abs(*it - c));
    rep.conjugate_gap = std::max(rep.conjugate_gap, best);
  }
  rep.conjugate_closed = rep.conjugate_gap <= 1e-12;
  if (!rep.conjugate_closed) rep.failures.push_back("boundary is not conjugation-symmetric");

  rep.arcs_ok = true;
  for (const auto& arc : region.arcs) {
    const auto r = check_arc(arc, config);
    const bool ok = region.n == 3 ? r.endpoints_ok && r.modulus_ok && r.residual_ok : r.ok();
    if (!ok) {
      rep.arcs_ok = false;
      rep.failures.push_back("arc " + arc.id() + " fails its contract");
    }
  }
  return rep;
}

bool hull_contains(cplx lambda, int p, cplx z) {
  if (p < 1) throw DomainError("hull_contains: p must be positive");
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(p) + 1);
  cplx w = 1.0;
  for (int k = 0; k <= p; ++k, w *= lambda) pts.push_back(w);
  auto less = [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  constexpr double eps = 1e-12;
  if (pts.size() == 1) return std::abs(z - pts[0]) <= eps;
  // Monotone chain.
  std::vector<cplx> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& q : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0) --k;
    hull[k++] = q;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() <= 2) return segment_distance(z, hull.front(), hull.back()) <= eps;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const cplx a = hull[i];
    const cplx b = hull[(i + 1) % hull.size()];
    if (cross(a, b, z) < -eps * std::abs(b - a)) return false;
  }
  return true;
}

int dubuc_malik_q(cplx lambda, int cap) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("dubuc_malik_q: need |lambda| < 1");
  if (lambda.imag() == 0.0 && lambda.real() > 0.0) throw DomainError("dubuc_malik_q: lambda is a positive real");
  cplx power = lambda * lambda;
  for (int q = 2; q <= cap; ++q, power *= lambda)
    if (hull_contains(lambda, q - 1, power)) return q;
  throw NotFoundError("dubuc_malik_q: no q <= " + std::to_string(cap));
}

ChordDistances chord_distances(double a, double b, double gamma) {
  if (!(b > 0.0)) throw DomainError("chord_distances: need b > 0");
  if (!(gamma > 1.0)) throw DomainError("chord_distances: need gamma > 1");
  const double ga = gamma * a;
  const double gb = gamma * b;
  const double g2 = gamma * gamma;
  ChordDistances out;
  out.d1 = b * (gamma - 1.0) / std::hypot(1.0 - ga, gb);
  out.d2 = g2 * (gamma - 1.0) * b * (a * a + b * b) /
           std::hypot(ga - g2 * (a * a - b * b), gb - 2.0 * g2 * a * b);
  return out;
}

ExtremalityReport extremality_probe(const Region& region, cplx z, const std::vector<double>& gammas,
                                    double boundary_tol) {
  ExtremalityReport rep;
  rep.z = z;
  rep.boundary_distance = boundary_distance(region, z);
  if (rep.boundary_distance > boundary_tol)
    throw PreconditionError("extremality_probe: point is " + std::to_string(rep.boundary_distance) +
                            " away from the boundary");
  rep.all_exit = true;
  double smallest = std::numeric_limits<double>::infinity();
  for (double g : gammas) {
    if (!(g > 1.0)) throw DomainError("extremality_probe: gamma must exceed 1");
    const bool exits = !contains(region, g * z, 0.0);
    rep.verdicts.push_back({g, exits});
    rep.all_exit = rep.all_exit && exits;
    smallest = std::min(smallest, g);
  }
  if (z.imag() != 0.0 && !gammas.empty()) rep.chords = chord_distances(z.real(), std::abs(z.imag()), smallest);
  return rep;
}

}  // namespace karc
