#include "pqbernstein/table.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include "json.hpp"
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pqb {

namespace {

// Header tokens are whitespace-separated and cells comma-separated, so those
// characters are replaced rather than quoted.
std::string sanitize(const std::string& text, bool for_header) {
  std::string out = text;
  for (char& c : out) {
    if (std::isspace(static_cast<unsigned char>(c)) || (!for_header && c == ',')) c = '_';
  }
  return out;
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return sanitize(std::get<std::string>(cell), false);
}

Cell parse_cell(const std::string& text) {
  if (!text.empty()) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() + text.size()) return value;
  }
  return text;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(line);
  while (std::getline(in, current, sep)) out.push_back(current);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void parse_key_values(const std::string& text, KeyValues& into, std::size_t line_no) {
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed key=value '" +
                               token + "'");
    }
    into.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  out << '#';
  for (const auto& [key, value] : table.params) {
    out << ' ' << sanitize(key, true) << '=' << sanitize(value, true);
  }
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << sanitize(table.columns[i], false);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  for (const auto& [key, value] : table.verdicts) {
    out << "# verdict " << sanitize(key, true) << '=' << sanitize(value, true) << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["params"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.params) doc["params"][key] = value;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) {
          jrow.push_back(*d);
        } else {
          jrow.push_back(nullptr);
        }
      } else {
        jrow.push_back(std::get<std::string>(cell));
      }
    }
    doc["rows"].push_back(std::move(jrow));
  }
  doc["verdicts"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.verdicts) doc["verdicts"][key] = value;
  out << doc.dump(1) << '\n';
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_columns = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!have_header) {
      if (line[0] != '#') throw std::runtime_error("line 1: expected '# key=value' header");
      parse_key_values(line.substr(1), table.params, line_no);
      have_header = true;
      continue;
    }
    if (line.rfind("# verdict ", 0) == 0) {
      parse_key_values(line.substr(10), table.verdicts, line_no);
      continue;
    }
    if (!have_columns) {
      table.columns = split(line, ',');
      have_columns = true;
      continue;
    }
    if (!table.verdicts.empty()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": data after verdicts");
    }
    const auto fields = split(line, ',');
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.columns.size()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_cell(f));
    table.rows.push_back(std::move(row));
  }
  if (!have_columns) throw std::runtime_error("missing header or column line");
  return table;
}

Table read_json(std::istream& in) {
  const auto doc = nlohmann::ordered_json::parse(in);
  Table table;
  for (const auto& [key, value] : doc.at("params").items()) {
    table.params.emplace_back(key, value.get<std::string>());
  }
  table.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& jrow : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& cell : jrow) {
      if (cell.is_number()) {
        row.emplace_back(cell.get<double>());
      } else if (cell.is_null()) {
        row.emplace_back(std::nan(""));
      } else {
        row.emplace_back(cell.get<std::string>());
      }
    }
    table.rows.push_back(std::move(row));
  }
  for (const auto& [key, value] : doc.at("verdicts").items()) {
    table.verdicts.emplace_back(key, value.get<std::string>());
  }
  return table;
}

}  // namespace pqb
