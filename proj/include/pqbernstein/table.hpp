#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pqb {

using Cell = std::variant<double, std::string>;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Output record shared by every CLI command.
///
/// CSV layout:
///   # key=value key=value ...      (params)
///   col1,col2,...
///   rows, doubles at 17 significant digits
///   # verdict key=value            (one line per verdict)
///
/// JSON layout: {"params": {...}, "columns": [...], "rows": [[...]], "verdicts": {...}}.
struct Table {
  KeyValues params;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  KeyValues verdicts;
};

/// printf("%.17g"); round-trips every finite double.
std::string format_double(double value);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

/// Inverse of write_csv. Cells that parse completely as a double become
/// doubles. Throws std::runtime_error naming the line on malformed input.
Table read_csv(std::istream& in);
Table read_json(std::istream& in);

}  // namespace pqb
