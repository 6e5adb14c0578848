#include "rise/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string_view>

#include "rise/error.hpp"

namespace rise {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& field, const std::string& why) {
  throw InputError(ErrorCode::ParseError, line, field, why);
}

[[noreturn]] void invalid(std::size_t line, const std::string& field, const std::string& why) {
  throw InputError(ErrorCode::ValidationError, line, field, why);
}

double parse_real(std::string_view text, std::size_t line, const std::string& field) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    parse_fail(line, field, "not a decimal number: '" + std::string(text) + "'");
  }
  return v;
}

int parse_binary(std::string_view text, std::size_t line, const std::string& field) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    parse_fail(line, field, "not an integer: '" + std::string(text) + "'");
  }
  if (v != 0 && v != 1) invalid(line, field, "value " + std::to_string(v) + " is not 0 or 1");
  return v;
}

struct Layout {
  std::size_t prob = 0;
  std::size_t label = 0;
  std::size_t env = 0;
  std::vector<std::size_t> attributes;
  std::size_t width = 0;
};

Layout read_header(std::string_view header, std::vector<std::string>& attribute_names) {
  Layout layout;
  const auto fields = split_fields(header);
  layout.width = fields.size();
  std::set<std::string_view> seen;
  bool has_prob = false, has_label = false, has_env = false;
  for (std::size_t c = 0; c < fields.size(); ++c) {
    const auto name = fields[c];
    if (name.empty()) parse_fail(1, "column " + std::to_string(c + 1), "empty column name");
    if (!seen.insert(name).second) {
      parse_fail(1, std::string(name), "duplicate column");
    }
    if (name == "prob") {
      layout.prob = c;
      has_prob = true;
    } else if (name == "label") {
      layout.label = c;
      has_label = true;
    } else if (name == "env") {
      layout.env = c;
      has_env = true;
    } else {
      layout.attributes.push_back(c);
      attribute_names.emplace_back(name);
    }
  }
  if (!has_prob) parse_fail(1, "prob", "missing required column");
  if (!has_label) parse_fail(1, "label", "missing required column");
  if (!has_env) parse_fail(1, "env", "missing required column");
  if (layout.attributes.empty()) parse_fail(1, "header", "no attribute columns");
  return layout;
}

}  // namespace

int PredictionTable::attribute_index(const std::string& name) const {
  const auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
  return it == attribute_names.end() ? -1 : static_cast<int>(it - attribute_names.begin());
}

std::vector<std::string> PredictionTable::environments() const {
  std::set<std::string> envs;
  for (const auto& r : rows) envs.insert(r.environment);
  return {envs.begin(), envs.end()};
}

PredictionTable parse_predictions(std::istream& in) {
  PredictionTable table;
  std::string line;
  std::size_t line_no = 0;
  std::optional<Layout> layout;
  std::size_t pending_blank = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) {
      // Blank lines are tolerated only at the end of the file.
      if (pending_blank == 0) pending_blank = line_no;
      continue;
    }
    if (pending_blank != 0) parse_fail(pending_blank, "row", "blank line");

    if (!layout) {
      layout = read_header(line, table.attribute_names);
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != layout->width) {
      parse_fail(line_no, "row",
                 "expected " + std::to_string(layout->width) + " fields, got " +
                     std::to_string(fields.size()));
    }
    PredictionRow row;
    row.prob = parse_real(fields[layout->prob], line_no, "prob");
    if (!(row.prob >= 0.0 && row.prob <= 1.0)) {
      invalid(line_no, "prob", "probability " + std::string(fields[layout->prob]) +
                                   " outside [0,1]");
    }
    row.label = parse_binary(fields[layout->label], line_no, "label");
    row.attributes.reserve(layout->attributes.size());
    for (std::size_t a = 0; a < layout->attributes.size(); ++a) {
      row.attributes.push_back(
          parse_binary(fields[layout->attributes[a]], line_no, table.attribute_names[a]));
    }
    row.environment = std::string(fields[layout->env]);
    if (row.environment.empty()) invalid(line_no, "env", "empty environment tag");
    // "all" selects every environment and cannot name one.
    if (row.environment == "all") invalid(line_no, "env", "environment tag 'all' is reserved");
    table.rows.push_back(std::move(row));
  }
  if (!layout) throw Error(ErrorCode::EmptyFile, "prediction file is empty");
  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "prediction file has no data rows");
  return table;
}

PredictionTable parse_predictions(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
  return parse_predictions(in);
}

void write_predictions(std::ostream& out, const PredictionTable& table) {
  out << "prob,label";
  for (const auto& a : table.attribute_names) out << ',' << a;
  out << ",env\n";
  std::array<char, 32> buf{};
  for (const auto& r : table.rows) {
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r.prob);
    out.write(buf.data(), res.ptr - buf.data());
    out << ',' << r.label;
    for (int v : r.attributes) out << ',' << v;
    out << ',' << r.environment << '\n';
  }
}

}  // namespace rise
