#pragma once

// Structured report: ordered key/value entries plus named tables.
//
// text     one key=value line per entry (arrays comma-joined), then each
//          table as "table=<name>" followed by CSV with a header row
// machine  a single JSON document with the same content

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lstord/io.hpp"

namespace lstord::cli {

using Json = nlohmann::ordered_json;

class Report {
 public:
  void set(const std::string& key, Json value) { entries_[key] = std::move(value); }

  // Adds a table; every row must have one cell per column.
  void add_table(const std::string& name, std::vector<std::string> columns, std::vector<std::vector<Json>> rows) {
    tables_.push_back({name, std::move(columns), std::move(rows)});
  }

  void write_text(std::ostream& os) const {
    for (const auto& [k, v] : entries_.items()) os << k << "=" << cell(v) << "\n";
    for (const auto& t : tables_) {
      os << "table=" << t.name << "\n";
      for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
      os << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << cell(r[c]);
        os << "\n";
      }
    }
  }

  void write_machine(std::ostream& os) const {
    Json doc = entries_;
    if (!tables_.empty()) {
      Json tables = Json::object();
      for (const auto& t : tables_) tables[t.name] = Json{{"columns", t.columns}, {"rows", t.rows}};
      doc["tables"] = std::move(tables);
    }
    os << doc.dump(2) << "\n";
  }

  static std::string cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_null()) return "nan";
    if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + cell(v[i]);
      return s;
    }
    return v.dump();
  }

 private:
  struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
  };
  Json entries_ = Json::object();
  std::vector<Table> tables_;
};

}  // namespace lstord::cli
