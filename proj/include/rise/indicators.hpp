#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rise/knees.hpp"
#include "rise/residuals.hpp"

namespace rise {

inline constexpr double kDivisionGuard = 1e-9;
inline constexpr double kDefaultThreshold = 0.5;

enum class UndefinedReason { MissingGroup, UndetectedKnee, ZeroNormalizer, ZeroBaseRate };

std::string_view to_string(UndefinedReason reason);

// An indicator value that may be undefined. A partial value is defined from
// only part of its inputs; `reason` then names what was dropped.
struct Indicator {
  std::optional<double> value;
  bool partial = false;
  std::optional<UndefinedReason> reason;

  static Indicator defined(double v) { return {v, false, std::nullopt}; }
  static Indicator undefined(UndefinedReason r) { return {std::nullopt, false, r}; }
  bool has_value() const { return value.has_value(); }

  friend bool operator==(const Indicator&, const Indicator&) = default;
};

struct Displacements {
  double v_left = 0.0;
  double v_right = 0.0;
  double h_left = 0.0;
  double h_right = 0.0;
  bool left_valid = false;
  bool right_valid = false;
  std::optional<UndefinedReason> left_reason;
  std::optional<UndefinedReason> right_reason;
};

double f_mean(const MedianSummary& summary);

/// Relative sensitive-minus-non-sensitive knee displacements per side,
/// normalized by the global knee coordinates. Subgroup pairs must already be
/// mapped into global rank space.
Displacements displacements(const KneePair& global, const KneePair& group0,
                            const KneePair& group1);

Indicator f_shift(const Displacements& disp);
Indicator f_acc(const Displacements& disp);

double accuracy(std::span<const PredictionRecord> records, double threshold = kDefaultThreshold);

/// Positive-prediction rate of group 1 over that of group 0.
Indicator demographic_parity(std::span<const PredictionRecord> records,
                             double threshold = kDefaultThreshold);

double mean_difference(std::span<const PredictionRecord> records,
                       double threshold = kDefaultThreshold);

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count0 = 0;
  std::size_t count1 = 0;
  std::optional<double> mean0;
  std::optional<double> mean1;
  std::optional<double> gap;
};

// Segments cover the rank axis; a rank r belongs to the segment lo < r <= hi.
// Tied residuals all take the rank of the last of them.
struct SegmentStats {
  std::vector<Segment> segments;
};

std::vector<double> segment_boundaries(const KneePair& global_knees, int mid_bins);

/// Per-segment group mean residuals and their absolute gap. Boundaries are the
/// detected global knees plus `mid_bins` equal bins between them.
SegmentStats adaptive_segments(const KneePair& global_knees, const SortedCurve& curve,
                               int mid_bins = 4);

struct Selection {
  std::string run_id;
  std::string attribute;
  std::string environment = "all";

  friend bool operator==(const Selection&, const Selection&) = default;
};

struct ReportOptions {
  double threshold = kDefaultThreshold;
  KneeOptions knees;
  int mid_bins = 4;
};

struct IndicatorReport {
  Selection selection;
  double f_mean = 0.0;
  Indicator f_shift;
  Indicator f_acc;
  double acc = 0.0;
  Indicator dp;
  double md = 0.0;
  double threshold = kDefaultThreshold;
  std::size_t n_total = 0;
  std::size_t n_group0 = 0;
  std::size_t n_group1 = 0;
  KneeAnalysis knees;
  Displacements displacements;
};

// Everything the pipeline derives for one selection.
struct Analysis {
  SortedCurve curve;
  SortedCurve group0_curve;
  SortedCurve group1_curve;
  MedianSummary medians;
  SegmentStats segments;
  IndicatorReport report;
};

/// residuals -> sorted curves -> medians -> knees -> displacements -> all six
/// indicators. Failures are rethrown as PipelineError naming the stage.
Analysis analyze(const Selection& selection, std::span<const PredictionRecord> records,
                 const ReportOptions& options = {});

IndicatorReport full_report(const Selection& selection, std::span<const PredictionRecord> records,
                            const ReportOptions& options = {});

}  // namespace rise
