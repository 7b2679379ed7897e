#include "sideknow/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sideknow {

CsvLayout csv_layout_from_string(const std::string& name) {
  if (name == "rows") return CsvLayout::Rows;
  if (name == "columns") return CsvLayout::Columns;
  throw Error("unknown CSV layout '" + name + "' (expected rows or columns)");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// RFC-4180 field splitting (quoted fields may contain commas and "").
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

double parse_cell(const std::string& cell, int line) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("non-numeric cell '" + cell + "'", line);
  }
  return value;
}

std::vector<std::vector<std::string>> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      rows.emplace_back();  // keeps line numbering; skipped below
      continue;
    }
    rows.push_back(split_csv(line));
  }
  return rows;
}

bool is_label_name(const std::string& name) { return name == "y"; }

}  // namespace

FeatureTable read_feature_table(const std::string& path, CsvLayout layout) {
  const auto lines = read_lines(path);
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // one vector per variable

  if (layout == CsvLayout::Rows) {
    std::size_t header_at = 0;
    while (header_at < lines.size() && lines[header_at].empty()) ++header_at;
    if (header_at == lines.size()) throw Error("'" + path + "' is empty");
    names = lines[header_at];
    series.assign(names.size(), {});
    for (std::size_t r = header_at + 1; r < lines.size(); ++r) {
      if (lines[r].empty()) continue;
      const int line_no = static_cast<int>(r) + 1;
      if (lines[r].size() != names.size()) {
        throw ParseError("ragged row: expected " + std::to_string(names.size()) + " cells, got " +
                             std::to_string(lines[r].size()),
                         line_no);
      }
      for (std::size_t c = 0; c < names.size(); ++c) series[c].push_back(parse_cell(lines[r][c], line_no));
    }
  } else {
    std::size_t width = 0;
    for (std::size_t r = 0; r < lines.size(); ++r) {
      if (lines[r].empty()) continue;
      const int line_no = static_cast<int>(r) + 1;
      if (width == 0) width = lines[r].size();
      if (lines[r].size() != width) {
        throw ParseError("ragged row: expected " + std::to_string(width) + " cells, got " +
                             std::to_string(lines[r].size()),
                         line_no);
      }
      names.push_back(lines[r][0]);
      std::vector<double> values;
      for (std::size_t c = 1; c < width; ++c) values.push_back(parse_cell(lines[r][c], line_no));
      series.push_back(std::move(values));
    }
  }

  if (names.empty()) throw Error("'" + path + "' has no variables");
  const std::size_t n = series.front().size();
  if (n == 0) throw Error("'" + path + "' contains no examples");

  std::vector<std::size_t> feature_idx;
  std::optional<std::size_t> label_idx;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (is_label_name(names[k])) {
      label_idx = k;
    } else {
      feature_idx.push_back(k);
    }
  }
  if (feature_idx.empty()) throw Error("'" + path + "' has no feature variables");

  FeatureTable table;
  table.features.resize(static_cast<Index>(feature_idx.size()), static_cast<Index>(n));
  for (std::size_t j = 0; j < feature_idx.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      table.features(static_cast<Index>(j), static_cast<Index>(i)) = series[feature_idx[j]][i];
    }
  }
  if (label_idx) {
    Vector y(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) y(static_cast<Index>(i)) = series[*label_idx][i];
    table.labels = std::move(y);
  }
  return table;
}

LabeledDataset load_dataset(const std::string& path, CsvLayout layout,
                            std::optional<double> feature_bound) {
  auto table = read_feature_table(path, layout);
  if (!table.labels) throw Error("'" + path + "' has no 'y' column");
  return LabeledDataset::make(std::move(table.features), std::move(*table.labels), feature_bound);
}

UnlabeledSet load_unlabeled(const std::string& path, CsvLayout layout) {
  auto table = read_feature_table(path, layout);
  return UnlabeledSet::make(std::move(table.features), std::move(table.labels));
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_dataset(const std::string& path, const LabeledDataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (Index j = 0; j < data.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << format_double(data.features(j, i)) << ",";
    out << format_double(data.labels(i)) << "\n";
  }
}

}  // namespace sideknow
