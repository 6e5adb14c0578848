#include "rise/knees.hpp"

#include <algorithm>
#include <cmath>

namespace rise {

std::string_view to_string(KneeKind kind) {
  return kind == KneeKind::ConvexLeft ? "convex_left" : "concave_right";
}

std::string_view to_string(KneeScope scope) {
  switch (scope) {
    case KneeScope::Global: return "global";
    case KneeScope::Group0: return "group0";
    case KneeScope::Group1: return "group1";
  }
  return "global";
}

namespace {

// A half that lies mostly above its chord is treated as concave, mostly below
// as convex. Exact balance keeps the nominal shape.
KneeShape dominant_curvature(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& y, KneeShape nominal) {
  const Eigen::Index n = x.size();
  const double y_span = y(n - 1) - y(0);
  if (!(y_span > 0)) return nominal;
  const Eigen::ArrayXd xn = (x.array() - x(0)) / (x(n - 1) - x(0));
  const Eigen::ArrayXd yn = (y.array() - y(0)) / y_span;
  const double area = (yn - xn).sum();
  if (area > 0) return KneeShape::ConcaveIncreasing;
  if (area < 0) return KneeShape::ConvexIncreasing;
  return nominal;
}

int smoothing_width(Eigen::Index length, const KneeOptions& options) {
  if (options.smoothing_window > 0) return options.smoothing_window;
  const auto w = static_cast<int>(std::lround(options.smoothing_fraction * static_cast<double>(length)));
  if (w < 3) return 0;
  return w % 2 == 0 ? w + 1 : w;
}

// Runs kneedle over curve[offset, offset + length) with sensitivity back-off.
KneePoint detect_half(const SortedCurve& curve, Eigen::Index offset, Eigen::Index length,
                      KneeShape shape, KneeKind kind, const KneeOptions& options) {
  KneePoint knee;
  knee.kind = kind;
  const auto x = curve.rank_positions.segment(offset, length);
  Eigen::VectorXd y = curve.residuals.segment(offset, length);
  const int window = smoothing_width(length, options);
  if (window >= 3) {
    y = moving_average(y, window);
    // The exact average of a sorted sequence is sorted; undo rounding drift.
    for (Eigen::Index i = 1; i < y.size(); ++i) y(i) = std::max(y(i), y(i - 1));
  }

  if (options.adaptive_curvature) shape = dominant_curvature(x, y, shape);
  knee.curvature = shape;
  for (double s = options.initial_sensitivity; s >= options.min_sensitivity; s /= 2.0) {
    knee.sensitivity_used = s;
    if (const auto idx = kneedle(x, y, shape, s)) {
      knee.detected = true;
      knee.residual = curve.residuals(offset + *idx);
      knee.percentile = curve.rank_positions(offset + *idx);
      return knee;
    }
  }
  return knee;
}

KneePair undetected_pair(KneeScope scope) {
  KneePair pair;
  pair.scope = scope;
  return pair;
}

}  // namespace

KneePair detect_twin_knees(const SortedCurve& curve, const KneeOptions& options,
                           KneeScope scope) {
  const Eigen::Index n = curve.size();
  if (n < kMinTwinKneePoints) {
    throw Error(ErrorCode::TooFewPoints, "twin knees need at least " +
                                             std::to_string(kMinTwinKneePoints) + " points, got " +
                                             std::to_string(n));
  }
  // Both halves share the median point.
  const Eigen::Index mid = (n - 1) / 2;
  KneePair pair;
  pair.scope = scope;
  pair.left = detect_half(curve, 0, mid + 1, KneeShape::ConvexIncreasing, KneeKind::ConvexLeft,
                          options);
  pair.right = detect_half(curve, mid, n - mid, KneeShape::ConcaveIncreasing,
                           KneeKind::ConcaveRight, options);
  return pair;
}

KneePoint map_subgroup_knee_to_global(const KneePoint& knee, const SortedCurve& /*subgroup_curve*/,
                                      const SortedCurve& global_curve) {
  if (!knee.detected) throw Error(ErrorCode::NotDetected, "cannot map an undetected knee");
  const auto* first = global_curve.residuals.data();
  const auto* last = first + global_curve.size();
  const auto at_or_below = std::upper_bound(first, last, knee.residual) - first;
  KneePoint mapped = knee;
  mapped.percentile =
      static_cast<double>(at_or_below) / static_cast<double>(global_curve.size());
  return mapped;
}

KneeAnalysis knee_analysis(const SortedCurve& global, const SortedCurve& group0,
                           const SortedCurve& group1, const KneeOptions& options) {
  auto detect = [&](const SortedCurve& c, KneeScope scope) {
    if (c.size() < kMinTwinKneePoints) return undetected_pair(scope);
    return detect_twin_knees(c, options, scope);
  };
  auto to_global = [&](KneePair pair, const SortedCurve& sub) {
    if (pair.left.detected) pair.left = map_subgroup_knee_to_global(pair.left, sub, global);
    if (pair.right.detected) pair.right = map_subgroup_knee_to_global(pair.right, sub, global);
    return pair;
  };

  KneeAnalysis out;
  out.global = detect(global, KneeScope::Global);
  out.group0 = to_global(detect(group0, KneeScope::Group0), group0);
  out.group1 = to_global(detect(group1, KneeScope::Group1), group1);
  return out;
}

}  // namespace rise
