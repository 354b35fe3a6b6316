#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "karc/region.hpp"

namespace karc {

/// %.17g: round-trips every double.
std::string format_double(double x);

/// Parses "a+bi", "a-bi", "a", "bi", "i" (spaces ignored). Throws DomainError.
cplx parse_complex(std::string_view text);

/// Indices of at most `budget` samples spread uniformly in arc length, snapped
/// to the nearest existing sample; always keeps the first and last.
std::vector<std::size_t> downsample_indices(const std::vector<cplx>& points, std::size_t budget);

/// "arc_1-8_1-7" for the pair (1/8, 1/7).
std::string arc_file_stem(const FareyPair& pair);

/// "x y" per line, alpha-ascending.
void write_arc_dat(const std::filesystem::path& path, const KArc& arc, std::size_t budget);

/// key: value lines describing the arc and its checks.
void write_arc_meta(const std::filesystem::path& path, const KArc& arc, const ArcReport& report,
                    bool simple, std::size_t budget);

/// "x y" per line.
void write_points_dat(const std::filesystem::path& path, const std::vector<cplx>& points);

/// JSON description of a region; `arc_files` holds the sample file of each arc.
std::string region_descriptor(const Region& region, const RegionConfig& config,
                              const std::vector<std::string>& arc_files);

/// Self-contained SVG: unit circle, boundary arcs, labelled Farey endpoints in [0, 1/2].
std::string render_svg(const Region& region, bool upper_only);

/// Writes `text` to `path`; throws std::runtime_error if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace karc
