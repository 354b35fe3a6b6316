#pragma once

#include <optional>
#include <string>
#include <vector>

#include "karc/farey.hpp"
#include "karc/ito_poly.hpp"
#include "karc/root_engine.hpp"

namespace karc {

enum class Provenance { Traced, Power, Conjugate, Segment };
std::string to_string(Provenance provenance);

/// How a power arc's parameter relates to its base: gamma = alpha or gamma = 1 - alpha.
enum class ParameterMap { Identity, Reversed };
std::string to_string(ParameterMap map);

struct ArcSample {
  double alpha;
  cplx lambda;
};

/// Where a power arc came from.
struct PowerOrigin {
  std::string base_id;
  int exponent = 1;
  ParameterMap map = ParameterMap::Identity;
  bool conjugated = false;  ///< the mirror image of the powered arc is used
  std::string rule;         ///< "power-i", "power-ii" or "square-4l"
};

/// A boundary arc of Theta_n joining e^{2 pi i p/q} (alpha = 0) to e^{2 pi i r/s} (alpha = 1).
struct KArc {
  ItoPolynomial poly;
  std::vector<ArcSample> samples;  ///< alpha-ascending
  Provenance provenance = Provenance::Traced;
  std::optional<PowerOrigin> power;
  std::string base_id;          ///< arc this one was derived from (Power / Conjugate)
  bool heuristic = false;       ///< direct trace of a Type II/III family: no theorem backs it
  int path_switches = 0;        ///< junctions used while selecting the root path

  [[nodiscard]] std::string id() const { return poly.pair.str(); }
  [[nodiscard]] const FareyFraction& sector_min() const { return poly.pair.lo; }
  [[nodiscard]] const FareyFraction& sector_max() const { return poly.pair.hi; }
};

struct TraceConfig {
  RootEngineConfig engine;
  std::vector<double> initial_grid;  ///< empty: uniform grid with engine.initial_intervals
  double select_tol = 1e-6;          ///< distance from a path end to the expected unit-circle point
  double endpoint_tol = 1e-9;
  double sector_tol = 1e-9;          ///< absolute, on Arg/2pi
  double residual_tol = 1e-9;
};

/// Invariant measurements of an arc against its own polynomial and sector.
struct ArcReport {
  double start_error = 0.0;
  double end_error = 0.0;
  double max_sector_excess = 0.0;   ///< how far Arg/2pi leaves [min, max]; <= 0 inside
  double sector_excess_alpha = 0.0;
  double max_modulus = 0.0;
  double max_interior_modulus = 0.0;  ///< over alpha in (0, 1)
  double max_reduced_residual = 0.0;
  double max_full_residual = 0.0;

  bool endpoints_ok = false;
  bool sector_ok = false;
  bool modulus_ok = false;
  bool residual_ok = false;
  [[nodiscard]] bool ok() const { return endpoints_ok && sector_ok && modulus_ok && residual_ok; }
};

ArcReport check_arc(const KArc& arc, const TraceConfig& config = {});

/// Arg(z)/2pi, shifted by a whole turn to land nearest `reference`.
double turn_near(cplx z, double reference);

/// The segment from 1 to e^{2 pi i/n}: the arc of the pair (0/1, 1/n).
KArc trace_type0(std::int64_t n, const std::vector<double>& grid);
KArc trace_type0(std::int64_t n, const TraceConfig& config = {});

/// Traces the root path of `poly` from e^{2 pi i p/q} to e^{2 pi i r/s}.
KArc trace_arc(const ItoPolynomial& poly, const TraceConfig& config = {});

struct ForbiddenRayHit {
  double alpha;
  cplx lambda;
  std::int64_t k;            ///< the ray sits at angle k pi / denominator
  std::int64_t denominator;  ///< s or q
};

/// Interior samples lying on a nonreal ray k pi/s or k pi/q (Type I arcs only).
std::optional<ForbiddenRayHit> forbidden_ray_violation(const KArc& arc, double angular_tol = 1e-8);

/// False when two samples with distinct alpha are within `floor` of each other.
bool simplicity_check(const KArc& arc, double floor = 1e-9);

enum class PowerCase { I, II };

/// (1/k, d/(m-1)) for case I (m = d k) or (d/m, 1/k) for case II (m - 1 = d k),
/// subject to n < m + k - 1.
FareyPair power_pair(std::int64_t d, std::int64_t m, std::int64_t n, PowerCase which);

/// lambda^d of the Type I arc for (1/m, 1/(m-1)); case I reverses the parameter.
KArc power_arc(const KArc& base, int d, PowerCase which, const TraceConfig& config = {});

/// Samples (gamma, lambda(alpha)^exponent) relabelled as an arc of `target`.
KArc pointwise_power(const KArc& base, int exponent, ParameterMap map, const FareyPair& target,
                     const std::string& rule, const TraceConfig& config = {});

/// Mirror image in the real axis; the sector reflects to (1 - max, 1 - min).
KArc conjugate_arc(const KArc& base);

}  // namespace karc
