#include "report.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace curveq::app {
namespace {

std::string real_text(double v) { return fmt::format("{:.17g}", v); }

std::string json_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return std::isfinite(d) ? real_text(d) : "null"; }
    std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
  };
  return std::visit(Visitor{}, cell);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return std::isfinite(d) ? real_text(d) : ""; }
    std::string operator()(const std::string& s) const { return csv_quote(s); }
  };
  return std::visit(Visitor{}, cell);
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string to_json_text(const RunReport& report) {
  std::string out = "{\n";
  out += "  \"task\": " + json_string(report.task) + ",\n";
  out += "  \"config_digest\": " + json_string(report.config_digest) + ",\n";
  out += "  \"pass\": " + std::string(report.pass ? "true" : "false") + ",\n";
  out += "  \"summary\": {";
  for (std::size_t i = 0; i < report.summary.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += "    " + json_string(report.summary[i].first) + ": " + json_cell(report.summary[i].second);
  }
  out += report.summary.empty() ? "},\n" : "\n  },\n";
  out += "  \"tables\": [";
  for (std::size_t t = 0; t < report.tables.size(); ++t) {
    const Table& table = report.tables[t];
    out += t == 0 ? "\n" : ",\n";
    out += "    {\n      \"name\": " + json_string(table.name) + ",\n      \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out += (c == 0 ? "" : ", ") + json_string(table.columns[c]);
    }
    out += "],\n      \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      out += r == 0 ? "\n        [" : ",\n        [";
      for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
        out += (c == 0 ? "" : ", ") + json_cell(table.rows[r][c]);
      }
      out += "]";
    }
    out += table.rows.empty() ? "]\n    }" : "\n      ]\n    }";
  }
  out += report.tables.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string to_csv_text(const RunReport& report) {
  std::string out = "# table summary\nkey,value\n";
  out += "task," + csv_quote(report.task) + "\n";
  out += "config_digest," + report.config_digest + "\n";
  out += std::string("pass,") + (report.pass ? "true" : "false") + "\n";
  for (const auto& [key, value] : report.summary) out += csv_quote(key) + "," + csv_cell(value) + "\n";
  for (const Table& table : report.tables) {
    out += "\n# table " + table.name + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c == 0 ? "" : ",") + csv_quote(table.columns[c]);
    out += "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c == 0 ? "" : ",") + csv_cell(row[c]);
      out += "\n";
    }
  }
  return out;
}

}  // namespace curveq::app
