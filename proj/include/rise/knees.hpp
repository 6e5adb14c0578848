#pragma once

#include <string_view>

#include "rise/kneedle.hpp"
#include "rise/residuals.hpp"

namespace rise {

enum class KneeKind { ConvexLeft, ConcaveRight };
enum class KneeScope { Global, Group0, Group1 };

std::string_view to_string(KneeKind kind);
std::string_view to_string(KneeScope scope);

// residual and percentile are meaningful only when detected is set.
struct KneePoint {
  KneeKind kind = KneeKind::ConvexLeft;
  bool detected = false;
  double residual = 0.0;
  double percentile = 0.0;
  double sensitivity_used = 0.0;
  // Curvature the detector assumed for this half of the curve.
  KneeShape curvature = KneeShape::ConvexIncreasing;
};

struct KneePair {
  KneePoint left{KneeKind::ConvexLeft};
  KneePoint right{KneeKind::ConcaveRight};
  KneeScope scope = KneeScope::Global;
};

struct KneeOptions {
  double initial_sensitivity = 1.0;
  double min_sensitivity = 0.125;
  // Moving-average width applied to each half before detection, as a fraction
  // of the half's length. Widths below 3 points leave the half unsmoothed.
  double smoothing_fraction = 0.02;
  // Fixed width in points; overrides smoothing_fraction when positive.
  int smoothing_window = 0;
  // Pick each half's curvature from the side of its chord the curve lies on,
  // instead of always convex (lower half) and concave (upper half).
  bool adaptive_curvature = true;
};

inline constexpr Eigen::Index kMinTwinKneePoints = 7;

/// Left knee on the lower half and right knee on the upper half of the curve,
/// split at the median rank (both halves share the median point). The sensitivity is halved after each
/// failed attempt until it drops below the configured minimum.
KneePair detect_twin_knees(const SortedCurve& curve, const KneeOptions& options = {},
                           KneeScope scope = KneeScope::Global);

/// Re-expresses a subgroup knee as a percentile of the global curve: the
/// number of global residuals <= the knee residual, divided by |D|.
KneePoint map_subgroup_knee_to_global(const KneePoint& knee, const SortedCurve& subgroup_curve,
                                      const SortedCurve& global_curve);

struct KneeAnalysis {
  KneePair global;
  KneePair group0;  // in global rank space
  KneePair group1;  // in global rank space
};

/// Twin knees for the global curve and both groups. Curves shorter than
/// kMinTwinKneePoints yield undetected knees instead of failing.
KneeAnalysis knee_analysis(const SortedCurve& global, const SortedCurve& group0,
                           const SortedCurve& group1, const KneeOptions& options = {});

}  // namespace rise
