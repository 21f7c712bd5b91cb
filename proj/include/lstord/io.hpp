#pragma once

// Comma-separated input and the run manifest.
//
// Input files hold one observation per line, numeric cells separated by
// commas. Blank lines are skipped; an optional first header row names the
// columns. Cells must parse as finite numbers, so "NA", "nan" or "inf" are
// rejected with the offending line and column (both 1-based).
//
// Layouts:
//   two_files  x file and y file with the same number of columns
//   grouped    one file whose group column holds exactly two labels
//   paired     two aligned files, or one file with 2p columns (X then Y)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "lstord/data.hpp"
#include "lstord/error.hpp"

namespace lstord {

struct CsvTable {
  std::vector<std::string> header;               // empty when the file has none
  std::vector<std::vector<std::string>> cells;   // data rows
  std::vector<std::size_t> line_numbers;         // 1-based source line of each row
  std::string source;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline CsvTable parse_csv(std::istream& in, bool has_header, const std::string& source = "<input>") {
  CsvTable t;
  t.source = source;
  std::string line;
  std::size_t lineno = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_commas(line);
    if (header_pending) {
      t.header = std::move(cells);
      header_pending = false;
      continue;
    }
    const std::size_t width = t.header.empty() ? (t.cells.empty() ? cells.size() : t.cells.front().size())
                                               : t.header.size();
    if (cells.size() != width)
      throw input_error(source + ": line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                        " columns, expected " + std::to_string(width));
    t.cells.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  return t;
}

inline CsvTable read_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return parse_csv(in, has_header, path);
}

inline double parse_number(const std::string& cell, const CsvTable& t, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw input_error(t.source + ": line " + std::to_string(t.line_numbers[row]) + ", column " +
                      std::to_string(col + 1) + ": \"" + cell + "\" is not a finite number");
  return v;
}

// Numeric matrix from the selected columns (all columns when empty).
inline DataSet to_dataset(const CsvTable& t, const std::vector<std::size_t>& columns = {},
                          const std::vector<std::size_t>& rows = {}) {
  std::vector<std::size_t> cols = columns;
  if (cols.empty() && !t.cells.empty())
    for (std::size_t k = 0; k < t.cells.front().size(); ++k) cols.push_back(k);
  std::vector<std::size_t> sel = rows;
  if (sel.empty())
    for (std::size_t i = 0; i < t.cells.size(); ++i) sel.push_back(i);
  if (sel.empty() || cols.empty()) throw input_error(t.source + ": no observations");
  std::vector<double> v;
  v.reserve(sel.size() * cols.size());
  for (std::size_t i : sel)
    for (std::size_t k : cols) v.push_back(parse_number(t.cells[i][k], t, i, k));
  return DataSet(sel.size(), cols.size(), std::move(v));
}

inline std::pair<DataSet, DataSet> parse_two_files(const std::string& x_path, const std::string& y_path,
                                                   bool has_header) {
  DataSet x = to_dataset(read_csv(x_path, has_header));
  DataSet y = to_dataset(read_csv(y_path, has_header));
  if (x.cols() != y.cols())
    throw input_error("x has " + std::to_string(x.cols()) + " columns but y has " + std::to_string(y.cols()));
  return {std::move(x), std::move(y)};
}

struct GroupedInput {
  DataSet x, y;
  std::string x_label, y_label;
};

// `group` is a header name, or a 1-based column index. x takes the
// lexicographically first label unless x_label is given.
inline GroupedInput parse_grouped(const CsvTable& t, const std::string& group,
                                  const std::optional<std::string>& x_label = std::nullopt) {
  if (t.cells.empty()) throw input_error(t.source + ": no observations");
  const std::size_t width = t.cells.front().size();
  std::optional<std::size_t> gcol;
  for (std::size_t k = 0; k < t.header.size(); ++k)
    if (t.header[k] == group) gcol = k;
  if (!gcol) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(group.data(), group.data() + group.size(), idx);
    if (ec != std::errc() || ptr != group.data() + group.size() || idx < 1 || idx > width)
      throw input_error(t.source + ": unknown group column \"" + group + "\"");
    gcol = idx - 1;
  }
  std::vector<std::string> labels;
  for (const auto& r : t.cells)
    if (std::find(labels.begin(), labels.end(), r[*gcol]) == labels.end()) labels.push_back(r[*gcol]);
  std::sort(labels.begin(), labels.end());
  if (labels.size() != 2)
    throw input_error(t.source + ": group column must hold exactly two labels, found " + std::to_string(labels.size()));
  GroupedInput g;
  g.x_label = labels[0];
  g.y_label = labels[1];
  if (x_label) {
    if (*x_label == labels[1]) std::swap(g.x_label, g.y_label);
    else if (*x_label != labels[0]) throw input_error(t.source + ": unknown group label \"" + *x_label + "\"");
  }
  std::vector<std::size_t> cols, xr, yr;
  for (std::size_t k = 0; k < width; ++k)
    if (k != *gcol) cols.push_back(k);
  if (cols.empty()) throw input_error(t.source + ": no numeric columns besides the group column");
  for (std::size_t i = 0; i < t.cells.size(); ++i) (t.cells[i][*gcol] == g.x_label ? xr : yr).push_back(i);
  g.x = to_dataset(t, cols, xr);
  g.y = to_dataset(t, cols, yr);
  return g;
}

// One file with 2p columns: X_i in the first p, Y_i in the last p.
inline PairedSample parse_paired_single(const CsvTable& t) {
  if (t.cells.empty()) throw input_error(t.source + ": no observations");
  const std::size_t width = t.cells.front().size();
  if (width < 2 || width % 2 != 0) throw input_error(t.source + ": paired layout needs an even number (2p) of columns");
  std::vector<std::size_t> xc, yc;
  for (std::size_t k = 0; k < width / 2; ++k) {
    xc.push_back(k);
    yc.push_back(k + width / 2);
  }
  return PairedSample(to_dataset(t, xc), to_dataset(t, yc));
}

inline PairedSample parse_paired_files(const std::string& x_path, const std::string& y_path, bool has_header) {
  auto [x, y] = parse_two_files(x_path, y_path, has_header);
  if (x.rows() != y.rows())
    throw input_error("paired files differ in length: " + std::to_string(x.rows()) + " vs " + std::to_string(y.rows()));
  return PairedSample(std::move(x), std::move(y));
}

// Subcommand, inputs, parsed configuration, seed and version, serialized as
// key=value lines. Loading a saved manifest and running it reproduces the
// original output.
struct RunManifest {
  static constexpr const char* format_tag = "lstord-manifest";

  std::string subcommand;
  std::map<std::string, std::string> inputs;  // e.g. x, y, data
  std::map<std::string, std::string> config;  // every option, canonical text
  std::uint64_t seed = 0;
  std::string version;

  // Canonical text: fixed header, then sorted keys.
  std::string serialize() const {
    std::ostringstream os;
    os << format_tag << "=1\n";
    os << "version=" << version << "\n";
    os << "subcommand=" << subcommand << "\n";
    os << "seed=" << seed << "\n";
    for (const auto& [k, v] : inputs) os << "input." << k << "=" << v << "\n";
    for (const auto& [k, v] : config) os << "config." << k << "=" << v << "\n";
    return os.str();
  }

  static RunManifest parse(std::istream& in, const std::string& source = "<manifest>") {
    RunManifest m;
    std::string line;
    std::size_t lineno = 0;
    bool tagged = false;
    while (std::getline(in, line)) {
      ++lineno;
      const auto body = detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        throw input_error(source + ": line " + std::to_string(lineno) + " is not key=value");
      const std::string key(detail::trim(body.substr(0, eq)));
      const std::string value(detail::trim(body.substr(eq + 1)));
      if (key == format_tag) tagged = value == "1";
      else if (key == "version") m.version = value;
      else if (key == "subcommand") m.subcommand = value;
      else if (key == "seed") {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), m.seed);
        if (ec != std::errc() || ptr != value.data() + value.size())
          throw input_error(source + ": line " + std::to_string(lineno) + ": bad seed");
      } else if (key.starts_with("input.")) m.inputs[key.substr(6)] = value;
      else if (key.starts_with("config.")) m.config[key.substr(7)] = value;
      else throw input_error(source + ": line " + std::to_string(lineno) + ": unknown key \"" + key + "\"");
    }
    if (!tagged) throw input_error(source + ": missing " + std::string(format_tag) + "=1 header");
    if (m.subcommand.empty()) throw input_error(source + ": missing subcommand");
    return m;
  }

  static RunManifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open manifest " + path);
    return parse(in, path);
  }
};

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

// Shortest round-trip decimal text of a double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace lstord
