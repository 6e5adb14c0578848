#include "rise/json_io.hpp"

namespace rise {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json indicator_note(const Indicator& ind) {
  json note = {{"partial", ind.partial}};
  note["reason"] = ind.reason ? json(std::string(to_string(*ind.reason))) : json(nullptr);
  return note;
}

void require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::StoreError, std::string("missing field '") + key + "'");
}

}  // namespace

std::optional<UndefinedReason> reason_from_string(const std::string& text) {
  for (auto r : {UndefinedReason::MissingGroup, UndefinedReason::UndetectedKnee,
                 UndefinedReason::ZeroNormalizer, UndefinedReason::ZeroBaseRate}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

void to_json(json& j, const Indicator& ind) {
  j = {{"value", optional_number(ind.value)}, {"partial", ind.partial}};
  j["reason"] = ind.reason ? json(std::string(to_string(*ind.reason))) : json(nullptr);
}

void from_json(const json& j, Indicator& ind) {
  ind = {};
  if (j.is_number()) {
    ind.value = j.get<double>();
    return;
  }
  if (!j.at("value").is_null()) ind.value = j.at("value").get<double>();
  ind.partial = j.value("partial", false);
  if (j.contains("reason") && !j.at("reason").is_null()) {
    ind.reason = reason_from_string(j.at("reason").get<std::string>());
    if (!ind.reason) throw Error(ErrorCode::StoreError, "unknown reason code");
  }
}

void to_json(json& j, const Selection& s) {
  j = {{"run_id", s.run_id}, {"attribute", s.attribute}, {"environment", s.environment}};
}

void to_json(json& j, const MedianSummary& m) {
  j = {{"m_global", m.m_global}, {"m_group0", m.m_group0}, {"m_group1", m.m_group1},
       {"m_tilde0", m.m_tilde0}, {"m_tilde1", m.m_tilde1}};
}

void to_json(json& j, const KneePoint& k) {
  j = {{"kind", std::string(to_string(k.kind))},
       {"detected", k.detected},
       {"sensitivity", k.sensitivity_used},
       {"curvature", k.curvature == KneeShape::ConvexIncreasing ? "convex" : "concave"}};
  j["rank"] = k.detected ? json(k.percentile) : json(nullptr);
  j["residual"] = k.detected ? json(k.residual) : json(nullptr);
}

void to_json(json& j, const KneePair& p) {
  j = {{"scope", std::string(to_string(p.scope))}, {"left", p.left}, {"right", p.right}};
}

void to_json(json& j, const Segment& s) {
  j = {{"lo", s.lo},
       {"hi", s.hi},
       {"count0", s.count0},
       {"count1", s.count1},
       {"mean0", optional_number(s.mean0)},
       {"mean1", optional_number(s.mean1)},
       {"gap", optional_number(s.gap)}};
}

void to_json(json& j, const IndicatorReport& r) {
  json notes = json::object();
  auto note_if = [&](const char* name, const Indicator& ind) {
    if (!ind.value || ind.partial) notes[name] = indicator_note(ind);
  };
  note_if("dp", r.dp);
  note_if("f_shift", r.f_shift);
  note_if("f_acc", r.f_acc);

  auto status = [](const KneePair& p) {
    return json{{"left", p.left.detected}, {"right", p.right.detected}};
  };

  j = {{"selection", r.selection},
       {"threshold", r.threshold},
       {"counts", {{"n_total", r.n_total}, {"n_group0", r.n_group0}, {"n_group1", r.n_group1}}},
       {"indicators",
        {{"acc", r.acc},
         {"dp", optional_number(r.dp.value)},
         {"md", r.md},
         {"f_mean", r.f_mean},
         {"f_shift", optional_number(r.f_shift.value)},
         {"f_acc", optional_number(r.f_acc.value)}}},
       {"notes", notes},
       {"knee_status",
        {{"global", status(r.knees.global)},
         {"group0", status(r.knees.group0)},
         {"group1", status(r.knees.group1)}}}};
}

void to_json(json& j, const RecordedIndicators& r) {
  j = {{"acc", r.acc}, {"dp", r.dp},           {"md", r.md},
       {"f_mean", r.f_mean}, {"f_shift", r.f_shift}, {"f_acc", r.f_acc}};
}

void from_json(const json& j, RecordedIndicators& r) {
  r.acc = j.at("acc").get<Indicator>();
  r.dp = j.at("dp").get<Indicator>();
  r.md = j.at("md").get<Indicator>();
  r.f_mean = j.at("f_mean").get<Indicator>();
  r.f_shift = j.at("f_shift").get<Indicator>();
  r.f_acc = j.at("f_acc").get<Indicator>();
}

void to_json(json& j, const AttributeMetrics& m) { j = {{"dp", m.dp}, {"md", m.md}}; }

void from_json(const json& j, AttributeMetrics& m) {
  m.dp = j.at("dp").get<Indicator>();
  m.md = j.at("md").get<Indicator>();
}

void to_json(json& j, const EnvironmentMetrics& m) {
  j = {{"n", m.n}, {"acc", m.acc}, {"attributes", m.attributes}};
}

void from_json(const json& j, EnvironmentMetrics& m) {
  m.n = j.at("n").get<std::size_t>();
  m.acc = j.at("acc").get<double>();
  m.attributes = j.at("attributes").get<std::map<std::string, AttributeMetrics>>();
}

json manifest_entry_json(const RunManifest& run) {
  return {{"run_id", run.run_id},
          {"dataset", run.dataset},
          {"algorithm", run.algorithm},
          {"attribute_names", run.attribute_names},
          {"environments", run.environments},
          {"prediction_file", run.prediction_file},
          {"created_at", run.created_at}};
}

RunManifest manifest_entry_from_json(const json& j) {
  for (const char* key : {"run_id", "dataset", "algorithm", "attribute_names", "environments",
                          "prediction_file", "created_at"}) {
    require(j, key);
  }
  RunManifest run;
  try {
    run.run_id = j.at("run_id").get<std::string>();
    run.dataset = j.at("dataset").get<std::string>();
    run.algorithm = j.at("algorithm").get<std::string>();
    run.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
    run.environments = j.at("environments").get<std::vector<std::string>>();
    run.prediction_file = j.at("prediction_file").get<std::string>();
    run.created_at = j.at("created_at").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StoreError, std::string("malformed manifest entry: ") + e.what());
  }
  return run;
}

json run_summary_json(const RunManifest& run) {
  return {{"run_id", run.run_id},
          {"dataset", run.dataset},
          {"algorithm", run.algorithm},
          {"attributes", run.attribute_names},
          {"environments", run.environments},
          {"created_at", run.created_at}};
}

std::vector<Eigen::Index> downsample_indices(Eigen::Index n, Eigen::Index max_points) {
  std::vector<Eigen::Index> idx;
  if (n <= 0) return idx;
  if (max_points < 2 || n <= max_points) {
    idx.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
  }
  // Reserve one slot for the final point.
  const Eigen::Index stride = (n - 1 + (max_points - 1) - 1) / (max_points - 1);
  for (Eigen::Index i = 0; i < n - 1; i += stride) idx.push_back(i);
  idx.push_back(n - 1);
  return idx;
}

json curve_payload(const Analysis& a, Eigen::Index max_points) {
  const auto idx = downsample_indices(a.curve.size(), max_points);
  json rank = json::array(), residual = json::array(), group = json::array();
  for (auto i : idx) {
    rank.push_back(a.curve.rank_positions(i));
    residual.push_back(a.curve.residuals(i));
    group.push_back(a.curve.group_tags[static_cast<std::size_t>(i)]);
  }
  const auto& knees = a.report.knees;
  return {{"n_total", a.curve.size()},
          {"n_points", idx.size()},
          {"downsampled", static_cast<Eigen::Index>(idx.size()) < a.curve.size()},
          {"points", {{"rank", rank}, {"residual", residual}, {"group", group}}},
          {"medians", a.medians},
          {"knees", {{"global", knees.global}, {"group0", knees.group0}, {"group1", knees.group1}}},
          {"segments", a.segments.segments},
          {"report", a.report}};
}

json error_body(const Error& e) {
  json err = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* p = dynamic_cast<const PipelineError*>(&e)) err["stage"] = p->stage();
  if (const auto* in = dynamic_cast<const InputError*>(&e)) {
    err["line"] = in->line();
    err["field"] = in->field();
  }
  return {{"error", err}};
}

}  // namespace rise
