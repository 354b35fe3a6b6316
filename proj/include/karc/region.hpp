#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "karc/arc_tracer.hpp"

namespace karc {

/// How one upper-half pair gets its arc.
struct PowerRoute {
  FareyPair base;      ///< Type I pair whose arc is powered
  FareyPair raw;       ///< pair reached by the power before any conjugation
  int exponent = 2;
  ParameterMap map = ParameterMap::Identity;
  bool conjugate = false;
  std::string rule;    ///< "power-i", "power-ii" or "square-4l"
};

struct ArcPlan {
  FareyPair pair;
  ItoType type = ItoType::Type0;
  std::optional<PowerRoute> route;  ///< set for Type II/III pairs reachable by a power
  [[nodiscard]] bool heuristic() const {
    return !route && (type == ItoType::TypeII || type == ItoType::TypeIII);
  }
};

/// Upper-half pairs of F_n with their construction route. Requires n >= 3.
std::vector<ArcPlan> plan_upper_arcs(std::int64_t n);

struct RegionConfig {
  TraceConfig trace;
  double weld_tol = 1e-8;
  bool shadows = true;   ///< also trace power-built pairs directly
  unsigned threads = 0;  ///< 0: hardware concurrency
};

/// Direct trace of a power-built pair on the power arc's parameter grid.
struct Shadow {
  std::string pair_id;
  std::optional<KArc> arc;
  std::string error;           ///< why the trace failed, if it did
  double max_deviation = 0.0;  ///< max |power - direct| over the shared grid
};

struct Region {
  std::int64_t n = 0;
  /// Circular order: upper arcs by ascending sector, then their conjugates.
  std::vector<KArc> arcs;
  std::size_t upper_count = 0;
  std::vector<Shadow> shadows;
  /// Closed polyline (front == back), counterclockwise from 1.
  std::vector<cplx> boundary;
  /// arc_offsets[k]: index in `boundary` of arc k's first point.
  std::vector<std::size_t> arc_offsets;
  double resolution = 0.0;    ///< smallest spacing between consecutive boundary points
  double inner_radius = 0.0;  ///< distance from 0 to the boundary
  double weld_tol = 1e-8;

  [[nodiscard]] const KArc* find_arc(const std::string& id) const;
  [[nodiscard]] const Shadow* find_shadow(const std::string& id) const;
};

struct ArcOutcome {
  ArcPlan plan;
  std::optional<KArc> arc;  ///< empty when construction failed
  std::string error;
  std::exception_ptr cause;
  std::optional<Shadow> shadow;  ///< power-built pairs only
};

/// Builds the upper-half arcs of F_n, or only `only` (plus its power base).
/// Failures are recorded per pair instead of thrown.
std::vector<ArcOutcome> build_upper_arcs(std::int64_t n, const RegionConfig& config = {},
                                         const std::optional<FareyPair>& only = std::nullopt);

/// Throws ArcConstructionError for the first arc that fails.
Region build_region(std::int64_t n, const RegionConfig& config = {});

/// Distance from z to the boundary polyline.
double boundary_distance(const Region& region, cplx z);

/// True iff z is inside the boundary or within tol of it.
bool contains(const Region& region, cplx z, double tol);

enum class Location { Inside, Boundary, Outside };
std::string to_string(Location location);
Location locate(const Region& region, cplx z, double boundary_tol);

struct RegionReport {
  bool closed = false;
  bool circular_order = false;     ///< arc k starts at e^{2 pi i f_k}, f_k the k-th Farey fraction
  double max_modulus = 0.0;
  bool unit_disc = false;
  double conjugate_gap = 0.0;      ///< max distance from conj(z) to the boundary vertices
  bool conjugate_closed = false;
  std::size_t circle_touches = 0;  ///< vertices with |z| >= 1 - 1e-9
  bool circle_touches_endpoints = false;
  bool arcs_ok = false;
  std::vector<std::string> failures;
  [[nodiscard]] bool ok() const {
    return closed && circular_order && unit_disc && conjugate_closed && circle_touches_endpoints && arcs_ok;
  }
};

RegionReport check_region(const Region& region, const TraceConfig& config = {});

/// z in conv(1, lambda, ..., lambda^p).
bool hull_contains(cplx lambda, int p, cplx z);

/// Least q >= 2 with lambda^q in conv(1, ..., lambda^(q-1)).
int dubuc_malik_q(cplx lambda, int cap = 10'000);

struct ChordDistances {
  double d1 = 0.0;  ///< from a + bi to the line through 1 and gamma lambda
  double d2 = 0.0;  ///< from a + bi to the line through gamma lambda and gamma^2 lambda^2
};
ChordDistances chord_distances(double a, double b, double gamma);

struct GammaVerdict {
  double gamma;
  bool exits;  ///< gamma z lies outside the region (tolerance 0)
};

/// Numerical evidence about whether z is extremal; never a proof.
struct ExtremalityReport {
  cplx z;
  double boundary_distance = 0.0;
  std::vector<GammaVerdict> verdicts;
  bool all_exit = false;
  std::optional<ChordDistances> chords;  ///< at (Re z, |Im z|) and the smallest gamma, if Im z != 0
};

ExtremalityReport extremality_probe(const Region& region, cplx z, const std::vector<double>& gammas,
                                    double boundary_tol = 1e-6);

}  // namespace karc
