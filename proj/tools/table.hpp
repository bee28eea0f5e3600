#pragma once

// Tabular output for the command-line driver: CSV (header row, 17
// significant digits, '\n' line endings) and JSON mirroring the same rows
// under a metadata object.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gaussdist::cli {

using Json = nlohmann::ordered_json;

// std::monostate is an empty field (CSV) / null (JSON).
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

inline std::string csv_field(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "1" : "0"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, c);
}

inline Json json_value(const Cell& c) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(double x) const { return x; }
    Json operator()(long long x) const { return x; }
    Json operator()(bool x) const { return x; }
    Json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[header[i]] = json_value(row[i]);
      arr.push_back(std::move(obj));
    }
    return arr;
  }
};

// Ordered (quantity, value) pairs for single-result commands.
struct Record {
  std::vector<std::pair<std::string, Cell>> fields;

  void add(std::string key, Cell value) { fields.emplace_back(std::move(key), std::move(value)); }

  Table as_table() const {
    Table t{{"quantity", "value"}, {}};
    for (const auto& [k, v] : fields) t.rows.push_back({k, v});
    return t;
  }

  Json to_json() const {
    Json obj = Json::object();
    for (const auto& [k, v] : fields) obj[k] = json_value(v);
    return obj;
  }
};

}  // namespace gaussdist::cli
