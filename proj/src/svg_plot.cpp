#include "rise/svg_plot.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "rise/json_io.hpp"

namespace rise {

namespace {

constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // Avoid "-0.00" so equal geometry always prints identically.
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double width;
  double height;

  double px(double rank) const { return kMarginLeft + rank * (width - kMarginLeft - kMarginRight); }
  double py(double residual) const {
    const double plot_h = height - kMarginTop - kMarginBottom;
    return kMarginTop + (1.0 - (residual + 1.0) / 2.0) * plot_h;
  }
};

std::string diamond(double x, double y, double r) {
  return num(x) + "," + num(y - r) + " " + num(x + r) + "," + num(y) + " " + num(x) + "," +
         num(y + r) + " " + num(x - r) + "," + num(y);
}

std::string star(double x, double y, double r) {
  std::string pts;
  constexpr double kPi = 3.14159265358979323846;
  for (int k = 0; k < 10; ++k) {
    const double radius = (k % 2 == 0) ? r : r * 0.45;
    const double angle = -kPi / 2.0 + k * kPi / 5.0;
    if (k) pts += ' ';
    pts += num(x + radius * std::cos(angle)) + "," + num(y + radius * std::sin(angle));
  }
  return pts;
}

void polyline(std::ostringstream& out, const Frame& f, const SortedCurve& curve,
              const std::vector<Eigen::Index>& idx, const std::string& cls,
              const std::string& color, const std::string& dash, double stroke) {
  if (idx.empty()) return;
  out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"" << num(stroke) << "\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) out << ' ';
    out << num(f.px(curve.rank_positions(idx[k]))) << ',' << num(f.py(curve.residuals(idx[k])));
  }
  out << "\"/>\n";
}

std::vector<Eigen::Index> group_indices(const SortedCurve& curve, GroupId g,
                                        Eigen::Index max_points) {
  std::vector<Eigen::Index> members;
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    if (curve.group_tags[static_cast<std::size_t>(i)] == g) members.push_back(i);
  }
  std::vector<Eigen::Index> out;
  for (auto k : downsample_indices(static_cast<Eigen::Index>(members.size()), max_points)) {
    out.push_back(members[static_cast<std::size_t>(k)]);
  }
  return out;
}

void ruler(std::ostringstream& out, const Frame& f, double value, const std::string& scope,
           const std::string& color, const std::string& dash) {
  out << "<line class=\"median-ruler\" data-scope=\"" << scope << "\" x1=\"" << num(f.px(0.0))
      << "\" x2=\"" << num(f.px(1.0)) << "\" y1=\"" << num(f.py(value)) << "\" y2=\""
      << num(f.py(value)) << "\" stroke=\"" << color << "\" stroke-width=\"1.00\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << "><title>median " << scope << " = " << num(value) << "</title></line>\n";
}

void markers(std::ostringstream& out, const Frame& f, const KneePair& pair,
             const std::string& color) {
  const std::string scope(to_string(pair.scope));
  if (pair.left.detected) {
    out << "<polygon class=\"knee-marker knee-convex\" data-scope=\"" << scope << "\" fill=\""
        << color << "\" stroke=\"#000000\" stroke-width=\"0.80\" points=\""
        << diamond(f.px(pair.left.percentile), f.py(pair.left.residual), 7.0) << "\"/>\n";
  }
  if (pair.right.detected) {
    out << "<polygon class=\"knee-marker knee-concave\" data-scope=\"" << scope << "\" fill=\""
        << color << "\" stroke=\"#000000\" stroke-width=\"0.80\" points=\""
        << star(f.px(pair.right.percentile), f.py(pair.right.residual), 8.0) << "\"/>\n";
  }
}

}  // namespace

std::string render_svg(const Analysis& a, const PlotStyle& style) {
  const Frame f{static_cast<double>(style.width), static_cast<double>(style.height)};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
      << "\" fill=\"#ffffff\"/>\n";

  const auto& sel = a.report.selection;
  out << "<text x=\"" << num(kMarginLeft) << "\" y=\"24.00\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << escape(sel.run_id + " / " + sel.attribute + " / " + sel.environment)
      << "</text>\n";

  // Segmentation bands.
  for (std::size_t s = 0; s < a.segments.segments.size(); ++s) {
    const auto& seg = a.segments.segments[s];
    out << "<rect class=\"segment-band\" x=\"" << num(f.px(seg.lo)) << "\" y=\""
        << num(f.py(1.0)) << "\" width=\"" << num(f.px(seg.hi) - f.px(seg.lo)) << "\" height=\""
        << num(f.py(-1.0) - f.py(1.0)) << "\" fill=\"" << (s % 2 ? "#f0f0f0" : "#e4e4e4")
        << "\"><title>gap " << (seg.gap ? num(*seg.gap) : std::string("n/a")) << "</title></rect>\n";
  }

  // Axes, with y = 0 emphasized.
  out << "<line class=\"axis\" x1=\"" << num(f.px(0.0)) << "\" x2=\"" << num(f.px(0.0))
      << "\" y1=\"" << num(f.py(1.0)) << "\" y2=\"" << num(f.py(-1.0))
      << "\" stroke=\"#000000\" stroke-width=\"1.00\"/>\n";
  out << "<line class=\"zero-axis\" x1=\"" << num(f.px(0.0)) << "\" x2=\"" << num(f.px(1.0))
      << "\" y1=\"" << num(f.py(0.0)) << "\" y2=\"" << num(f.py(0.0))
      << "\" stroke=\"#000000\" stroke-width=\"1.50\"/>\n";
  for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    out << "<text x=\"" << num(kMarginLeft - 8.0) << "\" y=\"" << num(f.py(t) + 4.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
        << "</text>\n";
  }
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(f.py(-1.0) + 18.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
        << "</text>\n";
  }
  out << "<text x=\"" << num(f.px(0.5)) << "\" y=\"" << num(style.height - 8.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">normalized rank"
      << "</text>\n";

  polyline(out, f, a.curve, downsample_indices(a.curve.size(), style.max_points), "curve-global",
           style.global_color, "", 1.0);
  polyline(out, f, a.curve, group_indices(a.curve, 0, style.max_points), "curve-group0",
           style.group0_color, "", 2.0);
  polyline(out, f, a.curve, group_indices(a.curve, 1, style.max_points), "curve-group1",
           style.group1_color, "6 3", 2.0);

  ruler(out, f, a.medians.m_global, "global", style.global_color, "2 2");
  ruler(out, f, a.medians.m_group0, "group0", style.group0_color, "");
  ruler(out, f, a.medians.m_group1, "group1", style.group1_color, "6 3");

  markers(out, f, a.report.knees.global, style.global_color);
  markers(out, f, a.report.knees.group0, style.group0_color);
  markers(out, f, a.report.knees.group1, style.group1_color);

  out << "</svg>\n";
  return out.str();
}

}  // namespace rise
