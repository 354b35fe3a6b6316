#include "karc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "karc/errors.hpp"

namespace karc {
namespace {

std::vector<cplx> sample_points(const KArc& arc) {
  std::vector<cplx> pts;
  pts.reserve(arc.samples.size());
  for (const auto& s : arc.samples) pts.push_back(s.lambda);
  return pts;
}

double parse_real(std::string_view text, std::string_view whole) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw DomainError("cannot parse complex number '" + std::string(whole) + "'");
  return v;
}

std::string fixed(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw DomainError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, text), 0.0};
  s.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, text), parse_real(im, text)};
}

std::vector<std::size_t> downsample_indices(const std::vector<cplx>& points, std::size_t budget) {
  std::vector<std::size_t> idx;
  if (points.size() <= std::max<std::size_t>(budget, 2)) {
    for (std::size_t i = 0; i < points.size(); ++i) idx.push_back(i);
    return idx;
  }
  std::vector<double> cum(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) cum[i] = cum[i - 1] + std::abs(points[i] - points[i - 1]);
  const double total = cum.back();
  const std::size_t count = std::max<std::size_t>(budget, 2);
  for (std::size_t k = 0; k < count; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t i = static_cast<std::size_t>(it - cum.begin());
    if (i == points.size()) i = points.size() - 1;
    if (i > 0 && target - cum[i - 1] < cum[i] - target) --i;
    if (idx.empty() || idx.back() != i) idx.push_back(i);
  }
  idx.front() = 0;
  if (idx.back() != points.size() - 1) idx.push_back(points.size() - 1);
  return idx;
}

std::string arc_file_stem(const FareyPair& pair) {
  return "arc_" + std::to_string(pair.lo.p) + "-" + std::to_string(pair.lo.q) + "_" + std::to_string(pair.hi.p) +
         "-" + std::to_string(pair.hi.q);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_arc_dat(const std::filesystem::path& path, const KArc& arc, std::size_t budget) {
  const auto pts = sample_points(arc);
  std::string text;
  for (std::size_t i : downsample_indices(pts, budget))
    text += format_double(pts[i].real()) + " " + format_double(pts[i].imag()) + "\n";
  write_text(path, text);
}

void write_points_dat(const std::filesystem::path& path, const std::vector<cplx>& points) {
  std::string text;
  for (const auto& z : points) text += format_double(z.real()) + " " + format_double(z.imag()) + "\n";
  write_text(path, text);
}

void write_arc_meta(const std::filesystem::path& path, const KArc& arc, const ArcReport& report, bool simple,
                    std::size_t budget) {
  const auto& p = arc.poly;
  std::ostringstream m;
  m << "pair: " << arc.id() << "\n"
    << "n: " << p.n << "\n"
    << "type: " << to_string(p.type) << "\n"
    << "start: " << p.p << "/" << p.q << "\n"
    << "end: " << p.r << "/" << p.s << "\n"
    << "d: " << p.d << "\n"
    << "degree: " << p.degree() << "\n"
    << "provenance: " << to_string(arc.provenance) << "\n"
    << "heuristic: " << (arc.heuristic ? "true" : "false") << "\n";
  if (arc.power) {
    m << "base: " << arc.power->base_id << "\n"
      << "exponent: " << arc.power->exponent << "\n"
      << "parameter_map: " << to_string(arc.power->map) << "\n"
      << "conjugated: " << (arc.power->conjugated ? "true" : "false") << "\n"
      << "rule: " << arc.power->rule << "\n";
  }
  m << "path_switches: " << arc.path_switches << "\n"
    << "samples: " << arc.samples.size() << "\n"
    << "written: " << downsample_indices(sample_points(arc), budget).size() << "\n"
    << "max_reduced_residual: " << format_double(report.max_reduced_residual) << "\n"
    << "max_full_residual: " << format_double(report.max_full_residual) << "\n"
    << "max_sector_excess: " << format_double(report.max_sector_excess) << "\n"
    << "max_interior_modulus: " << format_double(report.max_interior_modulus) << "\n"
    << "endpoints_ok: " << (report.endpoints_ok ? "true" : "false") << "\n"
    << "sector_ok: " << (report.sector_ok ? "true" : "false") << "\n"
    << "modulus_ok: " << (report.modulus_ok ? "true" : "false") << "\n"
    << "residual_ok: " << (report.residual_ok ? "true" : "false") << "\n"
    << "simple_ok: " << (simple ? "true" : "false") << "\n";
  write_text(path, m.str());
}

std::string region_descriptor(const Region& region, const RegionConfig& config,
                              const std::vector<std::string>& arc_files) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["n"] = region.n;
  j["boundary_points"] = region.boundary.size();
  j["resolution"] = region.resolution;
  j["inner_radius"] = region.inner_radius;
  j["tolerances"] = {{"weld", config.weld_tol},
                     {"endpoint", config.trace.endpoint_tol},
                     {"sector", config.trace.sector_tol},
                     {"residual", config.trace.residual_tol},
                     {"select", config.trace.select_tol},
                     {"cluster", config.trace.engine.cluster_tol}};
  ordered_json arcs = ordered_json::array();
  for (std::size_t k = 0; k < region.arcs.size(); ++k) {
    const auto& arc = region.arcs[k];
    ordered_json a;
    a["pair"] = arc.id();
    a["half"] = k < region.upper_count ? "upper" : "lower";
    a["type"] = to_string(arc.poly.type);
    a["provenance"] = to_string(arc.provenance);
    a["heuristic"] = arc.heuristic;
    if (!arc.base_id.empty()) a["base"] = arc.base_id;
    if (arc.power) {
      a["exponent"] = arc.power->exponent;
      a["parameter_map"] = to_string(arc.power->map);
      a["conjugated"] = arc.power->conjugated;
      a["rule"] = arc.power->rule;
    }
    a["samples"] = arc.samples.size();
    if (k < arc_files.size()) a["file"] = arc_files[k];
    arcs.push_back(std::move(a));
  }
  j["arcs"] = std::move(arcs);
  ordered_json shadows = ordered_json::array();
  for (const auto& s : region.shadows) {
    ordered_json o;
    o["pair"] = s.pair_id;
    o["traced"] = s.arc.has_value();
    o["max_deviation"] = s.max_deviation;
    if (!s.error.empty()) o["error"] = s.error;
    shadows.push_back(std::move(o));
  }
  j["shadows"] = std::move(shadows);
  return j.dump(2) + "\n";
}

std::string render_svg(const Region& region, bool upper_only) {
  constexpr double scale = 300.0;
  constexpr double margin = 70.0;
  const double width = 2 * scale + 2 * margin;
  const double top = scale + margin;
  const double height = upper_only ? scale + 2 * margin : 2 * scale + 2 * margin;
  auto X = [&](cplx z) { return fixed(margin + scale * (z.real() + 1.0)); };
  auto Y = [&](cplx z) { return fixed(top - scale * z.imag()); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << " " << fixed(height, 0) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      ;
  if (upper_only)
    svg << "<path d=\"M " << X(1.0) << " " << Y(0.0) << " A " << fixed(scale) << " " << fixed(scale) << " 0 0 0 "
        << X(-1.0) << " " << Y(0.0) << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  else
    svg << "<circle cx=\"" << X(0.0) << "\" cy=\"" << Y(0.0) << "\" r=\"" << fixed(scale)
        << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>\n";
  svg
      << "<line x1=\"" << X(-1.1) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(1.1) << "\" y2=\"" << Y(0.0)
      << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
  if (!upper_only)
    svg << "<line x1=\"" << X(0.0) << "\" y1=\"" << Y(cplx(0, 1.1)) << "\" x2=\"" << X(0.0) << "\" y2=\""
        << Y(cplx(0, -1.1)) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";

  const std::size_t count = upper_only ? region.upper_count : region.arcs.size();
  for (std::size_t k = 0; k < count; ++k) {
    const auto& arc = region.arcs[k];
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"";
    if (arc.heuristic) svg << " stroke-dasharray=\"2,3\"";
    svg << " points=\"";
    std::vector<cplx> pts;
    for (const auto& s : arc.samples) pts.push_back(s.lambda);
    bool first = true;
    for (std::size_t i : downsample_indices(pts, 512)) {
      svg << (first ? "" : " ") << X(pts[i]) << "," << Y(pts[i]);
      first = false;
    }
    svg << "\"><title>" << arc.id() << " " << to_string(arc.poly.type) << " " << to_string(arc.provenance)
        << "</title></polyline>\n";
  }

  for (const auto& f : farey_sequence(region.n)) {
    if (2 * f.p > f.q) break;
    const cplx z = f.unit_point();
    const cplx label = 1.1 * z;
    const char* anchor = z.real() > 0.2 ? "start" : (z.real() < -0.2 ? "end" : "middle");
    svg << "<circle cx=\"" << X(z) << "\" cy=\"" << Y(z) << "\" r=\"3\" fill=\"black\"/>\n"
        << "<text x=\"" << X(label) << "\" y=\"" << Y(label) << "\" font-family=\"serif\" font-size=\"14\""
        << " text-anchor=\"" << anchor << "\" dominant-baseline=\"middle\">" << f.str() << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace karc
