#include "karc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "karc/errors.hpp"
#include "karc/io.hpp"
#include "karc/ito_poly.hpp"
#include "karc/region.hpp"
#include "karc/stochastic.hpp"

namespace karc {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::int64_t n = 0;
  std::string pair;
  std::size_t samples = 512;
  std::optional<double> tol;
  std::vector<double> gammas;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = "karc-out";
  std::string svg;
  std::string dat;
  bool upper = false;
  std::string point;
  std::string matrix_file;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string cplx_str(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create directory " + dir.string());
}

RegionConfig quick_config() {
  RegionConfig c;
  c.shadows = false;
  return c;
}

int cmd_farey(const Options& o, std::ostream& out) {
  for (const auto& f : farey_sequence(o.n)) out << f.str() << "\n";
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  for (const auto& pair : upper_half_pairs(o.n)) {
    const auto poly = classify(pair, o.n);
    out << poly.p << "/" << poly.q << " " << poly.r << "/" << poly.s << " " << to_string(poly.type) << " "
        << poly.q << " " << poly.s << " " << poly.d << "\n";
  }
  return kExitOk;
}

int cmd_arcs(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<FareyPair> only;
  if (!o.pair.empty()) {
    try {
      only = FareyPair::parse(o.pair, o.n);
    } catch (const Error& e) {
      throw DomainError(std::string("--pair: ") + e.what());
    }
  }
  if (o.n < 3) throw UnsupportedOrderError("arcs requires n >= 3");
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  const auto outcomes = build_upper_arcs(o.n, RegionConfig{}, only);

  char line[200];
  std::snprintf(line, sizeof line, "%-12s %-8s %-10s %-9s %-12s %-6s %-6s\n", "pair", "type", "provenance",
                "heuristic", "max_resid", "sector", "simple");
  out << line;
  bool failed = false;
  for (const auto& oc : outcomes) {
    if (!oc.arc) {
      failed = true;
      err << "arc " << oc.plan.pair.str() << " failed: " << oc.error << "\n";
      std::snprintf(line, sizeof line, "%-12s %-8s FAILED\n", oc.plan.pair.str().c_str(),
                    to_string(oc.plan.type).c_str());
      out << line;
      continue;
    }
    const auto& arc = *oc.arc;
    const auto rep = check_arc(arc);
    const bool simple = simplicity_check(arc);
    const bool sector_required = o.n > 3;
    if (!rep.endpoints_ok || !rep.modulus_ok || !rep.residual_ok || (sector_required && !rep.sector_ok) || !simple)
      failed = true;
    const auto stem = arc_file_stem(arc.poly.pair);
    write_arc_dat(dir / (stem + ".dat"), arc, o.samples);
    write_arc_meta(dir / (stem + ".meta"), arc, rep, simple, o.samples);
    std::snprintf(line, sizeof line, "%-12s %-8s %-10s %-9s %-12s %-6s %-6s\n", arc.id().c_str(),
                  to_string(arc.poly.type).c_str(), to_string(arc.provenance).c_str(),
                  arc.heuristic ? "yes" : "no",
                  sci(std::max(rep.max_reduced_residual, rep.max_full_residual)).c_str(),
                  rep.sector_ok ? "ok" : "FAIL", simple ? "ok" : "FAIL");
    out << line;
  }
  out << outcomes.size() << " arc(s) written to " << dir.string() << "\n";
  return failed ? kExitMathFailure : kExitOk;
}

int cmd_region(const Options& o, std::ostream& out) {
  const RegionConfig config;
  const Region region = build_region(o.n, config);
  const fs::path dir(o.out_dir);
  ensure_dir(dir);
  std::vector<std::string> files;
  for (const auto& arc : region.arcs) {
    files.push_back(arc_file_stem(arc.poly.pair) + ".dat");
    write_arc_dat(dir / files.back(), arc, o.samples);
  }
  write_points_dat(dir / "boundary.dat", region.boundary);
  write_text(dir / "region.json", region_descriptor(region, config, files));

  const auto rep = check_region(region, config.trace);
  out << "n: " << region.n << "\n"
      << "arcs: " << region.arcs.size() << " (" << region.upper_count << " upper)\n"
      << "boundary points: " << region.boundary.size() << "\n"
      << "closed: " << (rep.closed ? "ok" : "FAIL") << "\n"
      << "farey points in circular order: " << (rep.circular_order ? "ok" : "FAIL") << "\n"
      << "unit disc (max |z| = " << format_double(rep.max_modulus) << "): " << (rep.unit_disc ? "ok" : "FAIL")
      << "\n"
      << "conjugate symmetric: " << (rep.conjugate_closed ? "ok" : "FAIL") << "\n"
      << "unit circle met only at farey points (" << rep.circle_touches
      << "): " << (rep.circle_touches_endpoints ? "ok" : "FAIL") << "\n"
      << "arc contracts: " << (rep.arcs_ok ? "ok" : "FAIL") << "\n";
  for (const auto& f : rep.failures) out << "  " << f << "\n";
  out << "written to " << dir.string() << "\n";
  return rep.ok() ? kExitOk : kExitMathFailure;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const cplx z = parse_complex(o.point);
  const double tol = o.tol.value_or(1e-6);
  const Region region = build_region(o.n, quick_config());
  const Location loc = locate(region, z, tol);
  out << cplx_str(z) << ": " << to_string(loc) << "\n";
  if (o.gammas.empty()) return kExitOk;
  if (loc != Location::Boundary) {
    err << "extremality probe needs a point within " << tol << " of the boundary\n";
    return kExitUsage;
  }
  const auto rep = extremality_probe(region, z, o.gammas, tol);
  for (const auto& v : rep.verdicts)
    out << "probe: " << (v.exits ? "outside" : "inside") << " at gamma=" << v.gamma << "\n";
  if (rep.chords)
    out << "chord distances at gamma=" << *std::min_element(o.gammas.begin(), o.gammas.end())
        << ": d1=" << sci(rep.chords->d1) << " d2=" << sci(rep.chords->d2) << "\n";
  out << (rep.all_exit ? "evidence: consistent with an extremal point (numerical, not a proof)\n"
                       : "evidence: not extremal (a scaled point stays in the region)\n");
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const double tol = o.tol.value_or(1e-6);
  const Region region = build_region(o.n, RegionConfig{});
  const fs::path dir(o.out_dir);
  bool all_ok = true;
  auto line = [&](bool ok, const std::string& text) {
    out << (ok ? "PASS " : "FAIL ") << text << "\n";
    all_ok = all_ok && ok;
  };

  // Eigenvalue cloud.
  {
    std::mt19937_64 rng(o.seed);
    std::size_t count = 0, outside = 0;
    for (int t = 0; t < o.trials; ++t) {
      const auto a = random_stochastic(static_cast<int>(o.n), rng);
      bool bad = false;
      for (const auto& z : spectrum(a).roots) {
        ++count;
        if (!contains(region, z, tol)) {
          ++outside;
          bad = true;
        }
      }
      if (bad) {
        ensure_dir(dir);
        std::ofstream f(dir / ("outside_trial_" + std::to_string(t) + ".txt"));
        a.write(f);
      }
    }
    line(outside == 0, "eigenvalue cloud: " + std::to_string(count) + " eigenvalues, " + std::to_string(outside) +
                           " outside (tol " + sci(tol) + ")");
  }

  // Realization fidelity for Type 0 and Type I arcs.
  {
    std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double coeff_err = 0.0, sample_err = 0.0;
    std::size_t arcs = 0;
    for (std::size_t k = 0; k < region.upper_count; ++k) {
      const auto& arc = region.arcs[k];
      const auto& p = arc.poly;
      if (p.type != ItoType::Type0 && p.type != ItoType::TypeI) continue;
      ++arcs;
      auto realize = [&](double alpha) {
        return p.type == ItoType::Type0 ? realize_type0(static_cast<int>(p.n), alpha)
                                        : realize_type1(static_cast<int>(p.q), static_cast<int>(p.s), alpha);
      };
      for (int t = 0; t < 100; ++t) {
        const double alpha = unif(rng);
        const auto cp = char_poly(realize(alpha));
        const auto ref = reduced_coefficients(p, alpha);
        for (std::size_t i = 0; i < ref.size() && i < cp.size(); ++i)
          coeff_err = std::max(coeff_err, std::abs(cp[i] - ref[i]));
        if (cp.size() != ref.size()) coeff_err = INFINITY;
      }
      for (const auto& s : arc.samples) {
        double best = INFINITY;
        for (const auto& ev : spectrum(realize(s.alpha)).roots) best = std::min(best, std::abs(ev - s.lambda));
        sample_err = std::max(sample_err, best);
      }
    }
    line(coeff_err <= 1e-10, "realization char poly: " + std::to_string(arcs) + " arcs x 100 alpha, max error " +
                                 sci(coeff_err));
    line(sample_err <= 1e-8, "arc samples in realization spectra: max distance " + sci(sample_err));
  }

  // Power construction against direct tracing.
  {
    double dev = 0.0;
    bool traced = true;
    for (const auto& s : region.shadows) {
      dev = std::max(dev, s.max_deviation);
      traced = traced && s.arc.has_value();
    }
    line(traced && dev <= 1e-8, "power-vs-trace agreement: " + std::to_string(region.shadows.size()) +
                                    " power arcs, max deviation " + sci(dev) + " (limit 1e-8)");
  }

  const auto rep = check_region(region);
  line(rep.ok(), "region invariants: " + std::to_string(region.arcs.size()) + " arcs, " +
                     std::to_string(region.boundary.size()) + " boundary points");
  for (const auto& f : rep.failures) out << "  " << f << "\n";
  return all_ok ? kExitOk : kExitMathFailure;
}

int cmd_plot(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.svg.empty() && o.dat.empty()) {
    err << "plot: give --svg FILE and/or --dat DIR\n";
    return kExitUsage;
  }
  const Region region = build_region(o.n, quick_config());
  if (!o.svg.empty()) {
    write_text(o.svg, render_svg(region, o.upper));
    out << "wrote " << o.svg << "\n";
  }
  if (!o.dat.empty()) {
    const fs::path dir(o.dat);
    ensure_dir(dir);
    for (std::size_t k = 0; k < region.upper_count; ++k) {
      const auto& arc = region.arcs[k];
      write_arc_dat(dir / (arc_file_stem(arc.poly.pair) + ".dat"), arc, o.samples);
    }
    std::vector<cplx> endpoints;
    for (const auto& f : farey_sequence(o.n))
      if (2 * f.p <= f.q) endpoints.push_back(f.unit_point());
    write_points_dat(dir / "endpoints.dat", endpoints);
    out << "wrote " << region.upper_count << " arc files and endpoints.dat to " << dir.string() << "\n";
  }
  return kExitOk;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (o.matrix_file != "-") {
    file.open(o.matrix_file);
    if (!file) throw std::runtime_error("cannot read " + o.matrix_file);
    in = &file;
  }
  const auto a = StochasticMatrix::read(*in);
  const auto spec = spectrum(a);
  auto roots = spec.roots;
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : std::arg(x) < std::arg(y);
  });
  double radius = 0.0;
  for (const auto& z : roots) {
    out << format_double(z.real()) << " " << format_double(z.imag()) << "\n";
    radius = std::max(radius, std::abs(z));
  }
  out << "spectral radius: " << format_double(radius) << "\n";
  out << "char poly (ascending):";
  for (double c : char_poly(a)) out << " " << format_double(c);
  out << "\n";
  const auto flags = digraph_flags(a);
  out << "irreducible: " << (flags.irreducible ? "true" : "false") << "\n";
  out << "primitive: "
      << (flags.state == Primitivity::Undefined ? "undefined" : (flags.primitive ? "true" : "false")) << "\n";
  if (flags.period > 0) out << "period: " << flags.period << "\n";
  return kExitOk;
}

void add_n(CLI::App* sub, Options& o) { sub->add_option("n,--n", o.n, "order")->required(); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary arcs of the region of stochastic-matrix eigenvalues"};
  app.name("karc");
  app.require_subcommand(1);
  Options o;

  auto* farey = app.add_subcommand("farey", "list the Farey sequence F_n");
  add_n(farey, o);
  auto* classify_cmd = app.add_subcommand("classify", "type of every upper-half Farey pair");
  add_n(classify_cmd, o);
  auto* arcs = app.add_subcommand("arcs", "trace the upper-half arcs and write .dat/.meta files");
  add_n(arcs, o);
  arcs->add_option("--pair", o.pair, "only this pair, e.g. 1/3,3/8");
  arcs->add_option("--samples", o.samples, "points per .dat file")->check(CLI::PositiveNumber);
  arcs->add_option("--out", o.out_dir, "output directory");
  auto* region = app.add_subcommand("region", "build the closed boundary and check its invariants");
  add_n(region, o);
  region->add_option("--samples", o.samples, "points per .dat file")->check(CLI::PositiveNumber);
  region->add_option("--out", o.out_dir, "output directory");
  auto* check = app.add_subcommand("check", "locate a point; with --gamma, probe extremality");
  add_n(check, o);
  check->add_option("z", o.point, "complex number a+bi")->required();
  check->add_option("--gamma", o.gammas, "scale factors > 1")->check(CLI::Range(1.0, 1e9));
  check->add_option("--tol", o.tol, "boundary tolerance (default 1e-6)");
  auto* verify = app.add_subcommand("verify", "random-matrix containment and cross-checks");
  add_n(verify, o);
  verify->add_option("--trials", o.trials, "random matrices")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--tol", o.tol, "containment tolerance (default 1e-6)");
  verify->add_option("--out", o.out_dir, "where offending matrices are dumped");
  auto* plot = app.add_subcommand("plot", "SVG picture and/or .dat bundle of the boundary");
  add_n(plot, o);
  plot->add_option("--svg", o.svg, "SVG output file");
  plot->add_option("--dat", o.dat, "directory for the .dat bundle");
  plot->add_option("--samples", o.samples, "points per .dat file")->check(CLI::PositiveNumber);
  plot->add_flag("--upper", o.upper, "draw the upper half only");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and digraph flags of a matrix file");
  spectrum_cmd->add_option("file", o.matrix_file, "matrix file ('-' for stdin)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*farey) return cmd_farey(o, out);
    if (*classify_cmd) return cmd_classify(o, out);
    if (*arcs) return cmd_arcs(o, out, err);
    if (*region) return cmd_region(o, out);
    if (*check) return cmd_check(o, out, err);
    if (*verify) return cmd_verify(o, out);
    if (*plot) return cmd_plot(o, out, err);
    if (*spectrum_cmd) return cmd_spectrum(o, out);
  } catch (const InvalidOrderError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedOrderError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMathFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace karc
