#include "rise/residuals.hpp"

#include <algorithm>
#include <numeric>

namespace rise {

namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::vector<ResidualSample> compute_residuals(std::span<const PredictionRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no prediction records");
  std::vector<ResidualSample> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!valid_probability(r.prob_positive)) {
      throw Error(ErrorCode::DomainError,
                  "record " + std::to_string(i) + ": probability outside [0,1]");
    }
    if (r.label != 0 && r.label != 1) {
      throw Error(ErrorCode::DomainError, "record " + std::to_string(i) + ": label not in {0,1}");
    }
    if (r.group != 0 && r.group != 1) {
      throw Error(ErrorCode::DomainError, "record " + std::to_string(i) + ": group not in {0,1}");
    }
    out.push_back({r.prob_positive - static_cast<double>(r.label), r.group, r.environment});
  }
  return out;
}

SortedCurve build_sorted_curve(std::span<const ResidualSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "cannot build a curve from no samples");
  const auto n = samples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = samples[a];
    const auto& sb = samples[b];
    if (sa.residual != sb.residual) return sa.residual < sb.residual;
    if (sa.group != sb.group) return sa.group < sb.group;
    return a < b;
  });

  SortedCurve curve;
  const auto len = static_cast<Eigen::Index>(n);
  curve.residuals.resize(len);
  curve.rank_positions.resize(len);
  curve.group_tags.resize(n);
  for (Eigen::Index i = 0; i < len; ++i) {
    const auto& s = samples[order[static_cast<std::size_t>(i)]];
    curve.residuals(i) = s.residual;
    curve.rank_positions(i) = static_cast<double>(i + 1) / static_cast<double>(len);
    curve.group_tags[static_cast<std::size_t>(i)] = s.group;
  }
  curve.rank_positions(len - 1) = 1.0;
  return curve;
}

std::map<GroupId, std::vector<ResidualSample>> split_by_group(
    std::span<const ResidualSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "nothing to split");
  std::map<GroupId, std::vector<ResidualSample>> buckets;
  for (const auto& s : samples) buckets[s.group].push_back(s);
  return buckets;
}

std::map<GroupId, SortedCurve> split_by_group(const SortedCurve& curve) {
  if (curve.size() == 0) throw Error(ErrorCode::EmptyInput, "nothing to split");
  std::map<GroupId, std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    members[curve.group_tags[static_cast<std::size_t>(i)]].push_back(i);
  }
  std::map<GroupId, SortedCurve> out;
  for (const auto& [group, idx] : members) {
    SortedCurve sub;
    const auto len = static_cast<Eigen::Index>(idx.size());
    sub.residuals = curve.residuals(idx);
    sub.rank_positions =
        Eigen::VectorXd::LinSpaced(len, 1.0, static_cast<double>(len)) / static_cast<double>(len);
    sub.rank_positions(len - 1) = 1.0;
    sub.group_tags.assign(idx.size(), group);
    out.emplace(group, std::move(sub));
  }
  return out;
}

MedianSummary median_summary(std::span<const ResidualSample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no samples");
  std::vector<double> all;
  std::vector<double> by_group[2];
  all.reserve(samples.size());
  for (const auto& s : samples) {
    all.push_back(s.residual);
    if (s.group == 0 || s.group == 1) by_group[s.group].push_back(s.residual);
  }
  for (int g = 0; g < 2; ++g) {
    if (by_group[g].empty()) {
      throw Error(ErrorCode::MissingGroup, "missing group " + std::to_string(g));
    }
  }
  std::sort(all.begin(), all.end());
  std::sort(by_group[0].begin(), by_group[0].end());
  std::sort(by_group[1].begin(), by_group[1].end());

  MedianSummary s;
  s.m_global = median(all);
  s.m_group0 = median(by_group[0]);
  s.m_group1 = median(by_group[1]);
  s.m_tilde0 = s.m_group0 - s.m_global;
  s.m_tilde1 = s.m_group1 - s.m_global;
  return s;
}

MedianSummary median_summary(const SortedCurve& global, const SortedCurve& group0,
                             const SortedCurve& group1) {
  if (group0.size() == 0) throw Error(ErrorCode::MissingGroup, "missing group 0");
  if (group1.size() == 0) throw Error(ErrorCode::MissingGroup, "missing group 1");
  MedianSummary s;
  s.m_global = median(global.residuals);
  s.m_group0 = median(group0.residuals);
  s.m_group1 = median(group1.residuals);
  s.m_tilde0 = s.m_group0 - s.m_global;
  s.m_tilde1 = s.m_group1 - s.m_global;
  return s;
}

}  // namespace rise
