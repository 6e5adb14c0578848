#include "rise/store.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "rise/json_io.hpp"

namespace rise {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomically(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + target.string() + ": " + ec.message());
}

json read_json(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::StoreError, "cannot read " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StoreError, "malformed " + file.filename().string() + ": " + e.what());
  }
}

fs::path run_dir(const std::string& run_id) { return fs::path("runs") / run_id; }

fs::path metrics_path(const std::string& run_id) { return run_dir(run_id) / "metrics.json"; }

}  // namespace

bool valid_run_id(const std::string& id) {
  if (id.empty() || id.size() > 128 || id == "." || id == "..") return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch == '-' || ch == '.';
  });
}

std::map<std::string, EnvironmentMetrics> precompute_metrics(const PredictionTable& table,
                                                             double threshold) {
  std::map<std::string, EnvironmentMetrics> out;
  for (const auto& env : table.environments()) {
    std::vector<const PredictionRow*> rows;
    for (const auto& r : table.rows) {
      if (r.environment == env) rows.push_back(&r);
    }
    EnvironmentMetrics em;
    em.n = rows.size();
    std::vector<PredictionRecord> records;
    records.reserve(rows.size());
    for (std::size_t a = 0; a < table.attribute_names.size(); ++a) {
      records.clear();
      for (const auto* r : rows) records.push_back({r->prob, r->label, r->attributes[a], env});
      if (a == 0) em.acc = accuracy(records, threshold);

      const bool both_groups =
          std::any_of(records.begin(), records.end(), [](const auto& r) { return r.group == 0; }) &&
          std::any_of(records.begin(), records.end(), [](const auto& r) { return r.group == 1; });
      AttributeMetrics m;
      if (both_groups) {
        m.dp = demographic_parity(records, threshold);
        m.md = Indicator::defined(mean_difference(records, threshold));
      } else {
        m.dp = Indicator::undefined(UndefinedReason::MissingGroup);
        m.md = Indicator::undefined(UndefinedReason::MissingGroup);
      }
      em.attributes.emplace(table.attribute_names[a], std::move(m));
    }
    out.emplace(env, std::move(em));
  }
  return out;
}

Store::Store(fs::path root, Mode mode) : root_(std::move(root)) {
  std::error_code ec;
  if (!fs::exists(root_, ec)) {
    if (mode == Mode::OpenExisting) {
      throw Error(ErrorCode::StoreError, "store directory does not exist: " + root_.string());
    }
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create store: " + ec.message());
  } else if (!fs::is_directory(root_, ec)) {
    throw Error(ErrorCode::StoreError, "store path is not a directory: " + root_.string());
  }
}

std::vector<RunManifest> Store::read_manifest() const {
  const auto index = root_ / "manifest.json";
  std::error_code ec;
  if (!fs::exists(index, ec)) return {};
  const json doc = read_json(index);
  if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("runs") ||
      !doc.at("runs").is_array()) {
    throw Error(ErrorCode::StoreError, "manifest.json lacks format_version or runs");
  }
  if (doc.at("format_version") != kStoreFormatVersion) {
    throw Error(ErrorCode::StoreError, "unsupported manifest format_version");
  }
  std::vector<RunManifest> runs;
  std::set<std::string> ids;
  for (const auto& entry : doc.at("runs")) {
    auto run = manifest_entry_from_json(entry);
    if (!valid_run_id(run.run_id) || !ids.insert(run.run_id).second) {
      throw Error(ErrorCode::StoreError, "invalid or duplicate run id in manifest");
    }
    const json metrics = read_json(root_ / metrics_path(run.run_id));
    try {
      run.threshold = metrics.at("threshold").get<double>();
      run.precomputed =
          metrics.at("environments").get<std::map<std::string, EnvironmentMetrics>>();
      if (metrics.contains("recorded")) {
        run.recorded = metrics.at("recorded").get<decltype(run.recorded)>();
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::StoreError, "malformed metrics for run " + run.run_id + ": " + e.what());
    }
    runs.push_back(std::move(run));
  }
  std::sort(runs.begin(), runs.end(),
            [](const RunManifest& a, const RunManifest& b) { return a.run_id < b.run_id; });
  return runs;
}

void Store::write_manifest(const std::vector<RunManifest>& runs) const {
  json doc = {{"format_version", kStoreFormatVersion}, {"runs", json::array()}};
  for (const auto& r : runs) doc["runs"].push_back(manifest_entry_json(r));
  write_atomically(root_ / "manifest.json", doc.dump(2) + "\n");
}

std::vector<RunManifest> Store::list_runs() const { return read_manifest(); }

RunManifest Store::get_run(const std::string& run_id) const {
  for (auto& run : read_manifest()) {
    if (run.run_id == run_id) return run;
  }
  throw Error(ErrorCode::UnknownRun, "unknown run '" + run_id + "'");
}

std::string Store::register_run(RunManifest entry, const PredictionTable& table) {
  std::lock_guard lock(write_mutex_);
  if (!valid_run_id(entry.run_id)) {
    throw Error(ErrorCode::ValidationError,
                "run id must be non-empty and use only letters, digits, '.', '_' or '-'");
  }
  auto runs = read_manifest();
  for (const auto& r : runs) {
    if (r.run_id == entry.run_id) {
      throw Error(ErrorCode::DuplicateRun, "run '" + entry.run_id + "' already exists");
    }
  }
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "prediction table has no rows");
  const std::set<std::string> declared(entry.attribute_names.begin(), entry.attribute_names.end());
  const std::set<std::string> present(table.attribute_names.begin(), table.attribute_names.end());
  if (entry.attribute_names.empty() || declared.size() != entry.attribute_names.size() ||
      declared != present) {
    throw Error(ErrorCode::ValidationError,
                "declared attributes do not match the prediction file's attribute columns");
  }

  entry.environments = table.environments();
  entry.prediction_file = (run_dir(entry.run_id) / "predictions.csv").generic_string();
  if (entry.created_at.empty()) entry.created_at = utc_timestamp();
  entry.precomputed = precompute_metrics(table, entry.threshold);

  std::error_code ec;
  fs::create_directories(root_ / run_dir(entry.run_id), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create run directory: " + ec.message());

  std::ostringstream csv;
  write_predictions(csv, table);
  write_atomically(root_ / entry.prediction_file, csv.str());

  json metrics = {{"format_version", kStoreFormatVersion},
                  {"run_id", entry.run_id},
                  {"threshold", entry.threshold},
                  {"environments", entry.precomputed}};
  if (!entry.recorded.empty()) metrics["recorded"] = entry.recorded;
  write_atomically(root_ / metrics_path(entry.run_id), metrics.dump(2) + "\n");

  runs.push_back(entry);
  std::sort(runs.begin(), runs.end(),
            [](const RunManifest& a, const RunManifest& b) { return a.run_id < b.run_id; });
  write_manifest(runs);

  std::unique_lock cache_lock(cache_mutex_);
  tables_[entry.run_id] = std::make_shared<const PredictionTable>(table);
  return entry.run_id;
}

std::shared_ptr<const PredictionTable> Store::table(const std::string& run_id) const {
  {
    std::shared_lock lock(cache_mutex_);
    if (auto it = tables_.find(run_id); it != tables_.end()) return it->second;
  }
  const auto run = get_run(run_id);
  std::shared_ptr<const PredictionTable> parsed;
  try {
    parsed = std::make_shared<const PredictionTable>(parse_predictions(root_ / run.prediction_file));
  } catch (const Error& e) {
    throw Error(ErrorCode::StoreError, "run " + run_id + ": " + e.what());
  }
  std::unique_lock lock(cache_mutex_);
  return tables_.emplace(run_id, std::move(parsed)).first->second;
}

std::vector<PredictionRecord> Store::load_selection(const std::string& run_id,
                                                    const std::string& attribute,
                                                    const std::string& environment) const {
  const auto run = get_run(run_id);
  if (std::find(run.attribute_names.begin(), run.attribute_names.end(), attribute) ==
      run.attribute_names.end()) {
    throw Error(ErrorCode::UnknownAttribute,
                "run '" + run_id + "' has no attribute '" + attribute + "'");
  }
  if (environment != "all" && std::find(run.environments.begin(), run.environments.end(),
                                        environment) == run.environments.end()) {
    throw Error(ErrorCode::UnknownEnvironment,
                "run '" + run_id + "' has no environment '" + environment + "'");
  }
  const auto tbl = table(run_id);
  const int col = tbl->attribute_index(attribute);
  if (col < 0) throw Error(ErrorCode::StoreError, "prediction file lacks attribute " + attribute);

  std::vector<PredictionRecord> out;
  out.reserve(tbl->rows.size());
  for (const auto& r : tbl->rows) {
    if (environment != "all" && r.environment != environment) continue;
    out.push_back({r.prob, r.label, r.attributes[static_cast<std::size_t>(col)], r.environment});
  }
  return out;
}

Analysis evaluate(const Store& store, const Selection& selection, const ReportOptions& options) {
  const auto run = store.get_run(selection.run_id);
  const auto records = store.load_selection(selection.run_id, selection.attribute,
                                            selection.environment);
  auto analysis = analyze(selection, records, options);

  const auto env = run.precomputed.find(selection.environment);
  if (env != run.precomputed.end() && run.threshold == options.threshold) {
    const auto attr = env->second.attributes.find(selection.attribute);
    if (attr != env->second.attributes.end() && attr->second.md.value) {
      auto& report = analysis.report;
      report.acc = env->second.acc;
      report.dp = attr->second.dp;
      report.md = *attr->second.md.value;
    }
  }
  return analysis;
}

}  // namespace rise
