#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rise {

struct PredictionRow {
  double prob = 0.0;
  int label = 0;
  std::vector<int> attributes;  // parallel to PredictionTable::attribute_names
  std::string environment;
};

// Parsed prediction file. Features are never stored, only model outputs.
struct PredictionTable {
  std::vector<std::string> attribute_names;
  std::vector<PredictionRow> rows;

  /// Index of the named attribute column, or -1.
  int attribute_index(const std::string& name) const;
  /// Distinct environment tags, sorted.
  std::vector<std::string> environments() const;
};

/// Strict parse of the prediction CSV: header with `prob`, `label`, `env` and
/// one 0/1 column per attribute. Reports 1-based physical line numbers.
PredictionTable parse_predictions(std::istream& in);
PredictionTable parse_predictions(const std::filesystem::path& file);

/// Writes a table back as CSV (`prob,label,<attributes...>,env`) with
/// shortest round-trip number formatting.
void write_predictions(std::ostream& out, const PredictionTable& table);

}  // namespace rise
