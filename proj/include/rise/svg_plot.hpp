#pragma once

#include <string>

#include "rise/indicators.hpp"

namespace rise {

struct PlotStyle {
  int width = 800;
  int height = 500;
  std::string group0_color = "#0072B2";
  std::string group1_color = "#D55E00";
  std::string global_color = "#555555";
  Eigen::Index max_points = 5000;
};

/// Static SVG of the sorted residual view: group-colored curves, median
/// rulers, diamond (convex) and star (concave) knee markers, and shaded
/// segmentation bands. Output depends only on the analysis and style.
std::string render_svg(const Analysis& analysis, const PlotStyle& style = {});

}  // namespace rise
