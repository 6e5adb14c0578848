#pragma once

#include <Eigen/Core>

#include <map>
#include <span>
#include <string>
#include <vector>

#include "rise/error.hpp"

namespace rise {

// Binary sensitive-attribute value: 0 = non-sensitive, 1 = sensitive.
using GroupId = int;

struct PredictionRecord {
  double prob_positive = 0.0;
  int label = 0;
  GroupId group = 0;
  std::string environment;
};

struct ResidualSample {
  double residual = 0.0;
  GroupId group = 0;
  std::string environment;
};

// Ascending residuals against normalized rank (i+1)/n.
struct SortedCurve {
  Eigen::VectorXd residuals;
  Eigen::VectorXd rank_positions;
  std::vector<GroupId> group_tags;

  Eigen::Index size() const { return residuals.size(); }
};

struct MedianSummary {
  double m_global = 0.0;
  double m_group0 = 0.0;
  double m_group1 = 0.0;
  double m_tilde0 = 0.0;
  double m_tilde1 = 0.0;
};

/// Signed error prob - label per record. Throws DomainError on records that
/// violate the probability/label/group ranges.
std::vector<ResidualSample> compute_residuals(std::span<const PredictionRecord> records);

/// Sorts ascending with ties broken by (group, input index).
SortedCurve build_sorted_curve(std::span<const ResidualSample> samples);

std::map<GroupId, std::vector<ResidualSample>> split_by_group(
    std::span<const ResidualSample> samples);

/// Per-group subcurves of an already sorted curve, ranked within the group.
std::map<GroupId, SortedCurve> split_by_group(const SortedCurve& curve);

/// Median of an ascending sequence; even sizes average the two middle values.
template <typename Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& sorted) {
  const Eigen::Index n = sorted.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "median of an empty sequence");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (sorted(i) < sorted(i - 1)) throw Error(ErrorCode::NotSorted, "median input is not sorted");
  }
  const Eigen::Index mid = n / 2;
  if (n % 2 == 1) return sorted(mid);
  return (sorted(mid - 1) + sorted(mid)) / typename Derived::Scalar(2);
}

inline double median(std::span<const double> sorted) {
  return median(Eigen::Map<const Eigen::VectorXd>(sorted.data(), static_cast<Eigen::Index>(sorted.size())));
}

/// Global and per-group medians plus the group medians re-centered on the
/// global one. Throws MissingGroup if either group is empty.
MedianSummary median_summary(std::span<const ResidualSample> samples);

/// Same summary from curves that are already sorted.
MedianSummary median_summary(const SortedCurve& global, const SortedCurve& group0,
                             const SortedCurve& group1);

}  // namespace rise
