#include "rise/indicators.hpp"

#include <algorithm>
#include <cmath>

namespace rise {

std::string_view to_string(UndefinedReason reason) {
  switch (reason) {
    case UndefinedReason::MissingGroup: return "missing_group";
    case UndefinedReason::UndetectedKnee: return "undetected_knee";
    case UndefinedReason::ZeroNormalizer: return "zero_normalizer";
    case UndefinedReason::ZeroBaseRate: return "zero_base_rate";
  }
  return "unknown";
}

double f_mean(const MedianSummary& summary) {
  return 1.0 - std::abs(summary.m_tilde0 - summary.m_tilde1) / 2.0;
}

namespace {

struct SideResult {
  double v = 0.0;
  double h = 0.0;
  std::optional<UndefinedReason> reason;
};

SideResult side_displacement(const KneePoint& global, const KneePoint& k0, const KneePoint& k1) {
  SideResult out;
  if (!global.detected || !k0.detected || !k1.detected) {
    out.reason = UndefinedReason::UndetectedKnee;
    return out;
  }
  if (std::abs(global.residual) < kDivisionGuard || global.percentile < kDivisionGuard) {
    out.reason = UndefinedReason::ZeroNormalizer;
    return out;
  }
  out.v = (k1.residual - k0.residual) / global.residual;
  out.h = (k1.percentile - k0.percentile) / global.percentile;
  return out;
}

Indicator combine_sides(bool left_valid, double left, std::optional<UndefinedReason> left_reason,
                        bool right_valid, double right,
                        std::optional<UndefinedReason> right_reason) {
  if (left_valid && right_valid) return Indicator::defined(0.5 * std::abs(left) + 0.5 * std::abs(right));
  if (left_valid) return {std::abs(left), true, right_reason};
  if (right_valid) return {std::abs(right), true, left_reason};
  return Indicator::undefined(left_reason.value_or(
      right_reason.value_or(UndefinedReason::UndetectedKnee)));
}

struct GroupRates {
  std::size_t n[2] = {0, 0};
  std::size_t positive[2] = {0, 0};

  double rate(int g) const {
    return static_cast<double>(positive[g]) / static_cast<double>(n[g]);
  }
};

GroupRates group_rates(std::span<const PredictionRecord> records, double threshold) {
  GroupRates r;
  for (const auto& rec : records) {
    if (rec.group != 0 && rec.group != 1) {
      throw Error(ErrorCode::DomainError, "group not in {0,1}");
    }
    ++r.n[rec.group];
    if (rec.prob_positive >= threshold) ++r.positive[rec.group];
  }
  for (int g = 0; g < 2; ++g) {
    if (r.n[g] == 0) throw Error(ErrorCode::MissingGroup, "missing group " + std::to_string(g));
  }
  return r;
}

}  // namespace

Displacements displacements(const KneePair& global, const KneePair& group0,
                            const KneePair& group1) {
  Displacements d;
  const auto left = side_displacement(global.left, group0.left, group1.left);
  const auto right = side_displacement(global.right, group0.right, group1.right);
  d.left_valid = !left.reason;
  d.right_valid = !right.reason;
  d.left_reason = left.reason;
  d.right_reason = right.reason;
  if (d.left_valid) {
    d.v_left = left.v;
    d.h_left = left.h;
  }
  if (d.right_valid) {
    d.v_right = right.v;
    d.h_right = right.h;
  }
  return d;
}

Indicator f_shift(const Displacements& d) {
  return combine_sides(d.left_valid, d.h_left, d.left_reason, d.right_valid, d.h_right,
                       d.right_reason);
}

Indicator f_acc(const Displacements& d) {
  return combine_sides(d.left_valid, d.v_left, d.left_reason, d.right_valid, d.v_right,
                       d.right_reason);
}

double accuracy(std::span<const PredictionRecord> records, double threshold) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "accuracy of no records");
  std::size_t correct = 0;
  for (const auto& r : records) {
    const int predicted = r.prob_positive >= threshold ? 1 : 0;
    if (predicted == r.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

Indicator demographic_parity(std::span<const PredictionRecord> records, double threshold) {
  const auto rates = group_rates(records, threshold);
  if (rates.positive[0] == 0) return Indicator::undefined(UndefinedReason::ZeroBaseRate);
  return Indicator::defined(rates.rate(1) / rates.rate(0));
}

double mean_difference(std::span<const PredictionRecord> records, double threshold) {
  const auto rates = group_rates(records, threshold);
  return std::abs(rates.rate(1) - rates.rate(0));
}

std::vector<double> segment_boundaries(const KneePair& knees, int mid_bins) {
  if (mid_bins < 1) throw Error(ErrorCode::DomainError, "mid_bins must be >= 1");
  const double lo = knees.left.detected ? knees.left.percentile : 0.0;
  const double hi = knees.right.detected ? knees.right.percentile : 1.0;
  std::vector<double> b{0.0};
  if (knees.left.detected) b.push_back(lo);
  for (int j = 1; j < mid_bins; ++j) b.push_back(lo + (hi - lo) * j / mid_bins);
  if (knees.right.detected) b.push_back(hi);
  b.push_back(1.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

SegmentStats adaptive_segments(const KneePair& global_knees, const SortedCurve& curve,
                               int mid_bins) {
  if (curve.size() == 0) throw Error(ErrorCode::EmptyInput, "no curve to segment");
  const auto bounds = segment_boundaries(global_knees, mid_bins);

  SegmentStats stats;
  std::vector<double> sum0(bounds.size() - 1, 0.0);
  std::vector<double> sum1(bounds.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    Segment seg;
    seg.lo = bounds[k];
    seg.hi = bounds[k + 1];
    stats.segments.push_back(seg);
  }
  // Tied residuals share the rank of the last of them, so a boundary never
  // separates equal values.
  std::size_t k = 0;
  Eigen::Index run_end = 0;
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    if (run_end <= i) {
      run_end = i + 1;
      while (run_end < curve.size() && curve.residuals(run_end) == curve.residuals(i)) ++run_end;
    }
    const double r = curve.rank_positions(run_end - 1);
    while (k + 1 < stats.segments.size() && r > stats.segments[k].hi) ++k;
    auto& seg = stats.segments[k];
    if (curve.group_tags[static_cast<std::size_t>(i)] == 0) {
      ++seg.count0;
      sum0[k] += curve.residuals(i);
    } else {
      ++seg.count1;
      sum1[k] += curve.residuals(i);
    }
  }
  for (std::size_t s = 0; s < stats.segments.size(); ++s) {
    auto& seg = stats.segments[s];
    if (seg.count0 > 0) seg.mean0 = sum0[s] / static_cast<double>(seg.count0);
    if (seg.count1 > 0) seg.mean1 = sum1[s] / static_cast<double>(seg.count1);
    if (seg.mean0 && seg.mean1) seg.gap = std::abs(*seg.mean1 - *seg.mean0);
  }
  return stats;
}

Analysis analyze(const Selection& selection, std::span<const PredictionRecord> records,
                 const ReportOptions& options) {
  Analysis a;
  auto& report = a.report;
  report.selection = selection;
  report.threshold = options.threshold;

  std::vector<ResidualSample> samples;
  try {
    samples = compute_residuals(records);
  } catch (const Error& e) {
    throw PipelineError("residuals", e);
  }
  report.n_total = samples.size();
  for (const auto& s : samples) (s.group == 0 ? report.n_group0 : report.n_group1)++;

  try {
    for (int g = 0; g < 2; ++g) {
      if ((g == 0 ? report.n_group0 : report.n_group1) == 0) {
        throw Error(ErrorCode::MissingGroup, "missing group " + std::to_string(g));
      }
    }
    a.curve = build_sorted_curve(samples);
    auto groups = split_by_group(a.curve);
    a.group0_curve = std::move(groups.at(0));
    a.group1_curve = std::move(groups.at(1));
    a.medians = median_summary(a.curve, a.group0_curve, a.group1_curve);
  } catch (const Error& e) {
    throw PipelineError("medians", e);
  }

  try {
    report.knees = knee_analysis(a.curve, a.group0_curve, a.group1_curve, options.knees);
    report.displacements =
        displacements(report.knees.global, report.knees.group0, report.knees.group1);
    a.segments = adaptive_segments(report.knees.global, a.curve, options.mid_bins);
  } catch (const Error& e) {
    throw PipelineError("knees", e);
  }

  try {
    report.f_mean = f_mean(a.medians);
    report.f_shift = f_shift(report.displacements);
    report.f_acc = f_acc(report.displacements);
    report.acc = accuracy(records, options.threshold);
    report.dp = demographic_parity(records, options.threshold);
    report.md = mean_difference(records, options.threshold);
  } catch (const Error& e) {
    throw PipelineError("indicators", e);
  }
  return a;
}

IndicatorReport full_report(const Selection& selection, std::span<const PredictionRecord> records,
                            const ReportOptions& options) {
  return analyze(selection, records, options).report;
}

}  // namespace rise
