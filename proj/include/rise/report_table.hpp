#pragma once

#include <span>
#include <string>

#include "rise/indicators.hpp"
#include "rise/store.hpp"

namespace rise {

// One row of the comparison table, columns in display order.
struct ReportRow {
  std::string label;
  Indicator acc;
  Indicator dp;
  Indicator md;
  Indicator f_mean;
  Indicator f_shift;
  Indicator f_acc;
};

ReportRow row_from_report(std::string label, const IndicatorReport& report);

/// Row from a run's recorded indicators; nullopt if it has none for this
/// environment and attribute.
std::optional<ReportRow> row_from_stored(std::string label, const RunManifest& run,
                                         const std::string& environment,
                                         const std::string& attribute);

/// Aligned columns with three decimals. Undefined cells print `n/a`,
/// partial ones carry a trailing `*`; both are explained below the table.
std::string render_table(std::span<const ReportRow> rows);

/// Full-precision CSV (shortest round-trip formatting) with a notes column.
std::string render_csv(std::span<const ReportRow> rows);

}  // namespace rise
