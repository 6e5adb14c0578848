#pragma once

#include <json.hpp>

#include "rise/indicators.hpp"
#include "rise/store.hpp"

namespace rise {

inline constexpr Eigen::Index kMaxPayloadPoints = 5000;

std::optional<UndefinedReason> reason_from_string(const std::string& text);

void to_json(nlohmann::json& j, const Indicator& ind);
void from_json(const nlohmann::json& j, Indicator& ind);

void to_json(nlohmann::json& j, const Selection& s);
void to_json(nlohmann::json& j, const MedianSummary& m);
void to_json(nlohmann::json& j, const KneePoint& k);
void to_json(nlohmann::json& j, const KneePair& p);
void to_json(nlohmann::json& j, const Segment& s);
void to_json(nlohmann::json& j, const IndicatorReport& r);

void to_json(nlohmann::json& j, const RecordedIndicators& r);
void from_json(const nlohmann::json& j, RecordedIndicators& r);
void to_json(nlohmann::json& j, const AttributeMetrics& m);
void from_json(const nlohmann::json& j, AttributeMetrics& m);
void to_json(nlohmann::json& j, const EnvironmentMetrics& m);
void from_json(const nlohmann::json& j, EnvironmentMetrics& m);

/// Manifest index entry (precomputed metrics live in the sidecar).
nlohmann::json manifest_entry_json(const RunManifest& run);
RunManifest manifest_entry_from_json(const nlohmann::json& j);

/// Public summary served by the runs listing.
nlohmann::json run_summary_json(const RunManifest& run);

/// Indices kept when thinning a curve to at most `max_points` with a uniform
/// rank stride; the last point is always kept.
std::vector<Eigen::Index> downsample_indices(Eigen::Index n, Eigen::Index max_points);

/// Wire form of one rendered view. Indicators always come from the full data.
nlohmann::json curve_payload(const Analysis& analysis,
                             Eigen::Index max_points = kMaxPayloadPoints);

nlohmann::json error_body(const Error& e);

}  // namespace rise
