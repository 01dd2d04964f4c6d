#pragma once

#include "ballwidth/widths.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ballwidth::experiment {

// Log-log SVG: measured points, the fitted power law and a reference line of
// slope theory_slope through the geometric centre of the points.
std::string loglog_svg(const std::vector<std::pair<double, double>>& points, const RateFit& fit,
                       double theory_slope, const std::string& title, const std::string& hash);

}  // namespace ballwidth::experiment
