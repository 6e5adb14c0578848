#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rise/csv.hpp"
#include "rise/indicators.hpp"

namespace rise {

inline constexpr int kStoreFormatVersion = 1;

struct AttributeMetrics {
  Indicator dp;
  Indicator md;
};

struct EnvironmentMetrics {
  double acc = 0.0;
  std::size_t n = 0;
  std::map<std::string, AttributeMetrics> attributes;
};

// One table row recorded from an external evaluation, such as published
// results. Printed by `rise report --source stored`; never merged into live
// reports.
struct RecordedIndicators {
  Indicator acc;
  Indicator dp;
  Indicator md;
  Indicator f_mean;
  Indicator f_shift;
  Indicator f_acc;
};

struct RunManifest {
  std::string run_id;
  std::string dataset;
  std::string algorithm;
  std::vector<std::string> attribute_names;
  std::vector<std::string> environments;
  std::string prediction_file;  // relative to the store root
  std::string created_at;       // ISO 8601, UTC
  double threshold = kDefaultThreshold;
  std::map<std::string, EnvironmentMetrics> precomputed;
  // environment -> attribute -> recorded row; empty for ingested runs.
  std::map<std::string, std::map<std::string, RecordedIndicators>> recorded;
};

/// Acc, DP and MD for every (environment, attribute) of a table.
std::map<std::string, EnvironmentMetrics> precompute_metrics(
    const PredictionTable& table, double threshold = kDefaultThreshold);

bool valid_run_id(const std::string& id);

// Directory-backed run registry:
//
//   <root>/manifest.json              index of runs
//   <root>/runs/<id>/predictions.csv  normalized prediction table
//   <root>/runs/<id>/metrics.json     precomputed metrics sidecar
//
// Registration is serialized; readers share parsed tables, which never change
// once registered.
class Store {
 public:
  enum class Mode { OpenExisting, CreateIfMissing };

  explicit Store(std::filesystem::path root, Mode mode = Mode::OpenExisting);

  const std::filesystem::path& root() const { return root_; }

  /// All runs ordered by run_id. Throws StoreError on a malformed store.
  std::vector<RunManifest> list_runs() const;
  RunManifest get_run(const std::string& run_id) const;

  /// Persists the run and its precomputed metrics; returns the run id.
  std::string register_run(RunManifest entry, const PredictionTable& table);

  std::shared_ptr<const PredictionTable> table(const std::string& run_id) const;

  /// Rows of one run projected onto one attribute, optionally filtered to an
  /// environment ("all" keeps every row).
  std::vector<PredictionRecord> load_selection(const std::string& run_id,
                                               const std::string& attribute,
                                               const std::string& environment) const;

 private:
  std::vector<RunManifest> read_manifest() const;
  void write_manifest(const std::vector<RunManifest>& runs) const;

  std::filesystem::path root_;
  mutable std::mutex write_mutex_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::map<std::string, std::shared_ptr<const PredictionTable>> tables_;
};

/// Runs the full pipeline for a stored selection. Acc/DP/MD come from the
/// precomputed sidecar when the environment has one at the same threshold.
Analysis evaluate(const Store& store, const Selection& selection,
                  const ReportOptions& options = {});

}  // namespace rise
