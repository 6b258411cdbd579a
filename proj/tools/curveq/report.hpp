#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace curveq::app {

/// null, bool, integer, real or text. Non-finite reals are written as null.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::logic_error if the row width does not match the columns.
  void add(std::vector<Cell> row);
};

struct RunReport {
  std::string task;
  std::string config_digest;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<Table> tables;
  bool pass = true;
};

/// Fixed key order, reals at 17 significant digits, two-space indent and a
/// trailing newline. Identical reports give identical bytes.
std::string to_json_text(const RunReport& report);

/// One block per table: "# table <name>", a header line, then rows. The
/// summary comes first as a two-column key,value table.
std::string to_csv_text(const RunReport& report);

}  // namespace curveq::app
