#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "varcurve/curve.hpp"

namespace varcurve {

/// Decimal form with 17 significant digits (round-trips exactly).
std::string format_double(double v);

/// Parse a double written by format_double (or any plain decimal). Throws ConfigError.
double parse_double(std::string_view text);

/**
 * Curve file: first line a JSON header
 *   {"manifold": "sphere:2", "domain_kind": "interval", "n_samples": 201}
 * then a CSV block with a column header line "t,x0,x1,..." and one row
 * t_j, coordinates... per sample. SO(3) points are flattened row-major.
 */
std::string format_curve(const DiscreteCurve& x);
DiscreteCurve parse_curve(std::string_view text);

void write_curve(const std::filesystem::path& path, const DiscreteCurve& x);
DiscreteCurve read_curve(const std::filesystem::path& path);

}  // namespace varcurve
