#include "rise/report_table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace rise {

namespace {

constexpr std::array<const char*, 6> kColumns = {"Acc", "DP", "MD", "F_mean", "F_shift", "F_acc"};
constexpr std::array<const char*, 6> kCsvColumns = {"acc", "dp", "md", "f_mean", "f_shift", "f_acc"};

std::array<const Indicator*, 6> cells(const ReportRow& row) {
  return {&row.acc, &row.dp, &row.md, &row.f_mean, &row.f_shift, &row.f_acc};
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string note_text(const Indicator& ind) {
  std::string out = ind.partial ? "partial" : "undefined";
  if (ind.reason) out += ":" + std::string(to_string(*ind.reason));
  return out;
}

}  // namespace

ReportRow row_from_report(std::string label, const IndicatorReport& r) {
  return {std::move(label),
          Indicator::defined(r.acc),
          r.dp,
          Indicator::defined(r.md),
          Indicator::defined(r.f_mean),
          r.f_shift,
          r.f_acc};
}

std::optional<ReportRow> row_from_stored(std::string label, const RunManifest& run,
                                         const std::string& environment,
                                         const std::string& attribute) {
  const auto env = run.recorded.find(environment);
  if (env == run.recorded.end()) return std::nullopt;
  const auto attr = env->second.find(attribute);
  if (attr == env->second.end()) return std::nullopt;
  const auto& r = attr->second;
  return ReportRow{std::move(label), r.acc, r.dp, r.md, r.f_mean, r.f_shift, r.f_acc};
}

std::string render_table(std::span<const ReportRow> rows) {
  // Cell text first, then pad: labels left-aligned, numbers right-aligned.
  std::vector<std::array<std::string, 7>> grid;
  grid.push_back({"Algorithm"});
  for (std::size_t c = 0; c < kColumns.size(); ++c) grid[0][c + 1] = kColumns[c];

  bool any_partial = false;
  std::vector<std::string> undefined_notes;
  for (const auto& r : rows) {
    std::array<std::string, 7> line{r.label};
    const auto values = cells(r);
    for (std::size_t c = 0; c < values.size(); ++c) {
      const Indicator& ind = *values[c];
      if (!ind.value) {
        line[c + 1] = "n/a";
        undefined_notes.push_back(r.label + " " + kColumns[c] + ": " +
                                  std::string(ind.reason ? to_string(*ind.reason) : "undefined"));
        continue;
      }
      line[c + 1] = fixed3(*ind.value);
      if (ind.partial) {
        line[c + 1] += '*';
        any_partial = true;
      }
    }
    grid.push_back(std::move(line));
  }

  // Keep decimal points aligned in columns holding a starred value.
  for (std::size_t c = 1; c < 7; ++c) {
    const bool starred =
        std::any_of(grid.begin(), grid.end(), [&](const auto& l) { return l[c].ends_with('*'); });
    if (!starred) continue;
    for (auto& line : grid) {
      if (!line[c].ends_with('*')) line[c] += ' ';
    }
  }

  std::array<std::size_t, 7> width{};
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  for (const auto& line : grid) {
    std::string text = line[0] + std::string(width[0] - line[0].size(), ' ');
    for (std::size_t c = 1; c < line.size(); ++c) {
      text += ' ' + std::string(width[c] - line[c].size(), ' ') + line[c];
    }
    text.erase(text.find_last_not_of(' ') + 1);
    out << text << '\n';
  }
  if (any_partial) out << "* computed from one knee side only\n";
  for (const auto& note : undefined_notes) out << "n/a " << note << '\n';
  return out.str();
}

std::string render_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << "algorithm";
  for (const char* c : kCsvColumns) out << ',' << c;
  out << ",notes\n";
  for (const auto& r : rows) {
    out << r.label;
    std::string notes;
    const auto values = cells(r);
    for (std::size_t c = 0; c < values.size(); ++c) {
      const Indicator& ind = *values[c];
      out << ',';
      if (ind.value) out << shortest(*ind.value);
      if (!ind.value || ind.partial) {
        if (!notes.empty()) notes += ';';
        notes += std::string(kCsvColumns[c]) + "=" + note_text(ind);
      }
    }
    out << ',' << notes << '\n';
  }
  return out.str();
}

}  // namespace rise
