#include "cavlat/cli/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cavlat/cli/grammar.hpp"

namespace cavlat::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == sep) {
    out.emplace_back();
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

}  // namespace

void DataTable::add_column(std::string name, std::vector<double> values) {
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

std::size_t DataTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw CsvError("missing column '" + name + "'");
}

const std::string* DataTable::find_metadata(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

void write_csv(std::ostream& out, const DataTable& table) {
  for (const auto& [key, value] : table.metadata) {
    out << "# " << key << '=' << value << '\n';
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << format_double(table.data[c][r]);
    }
    out << '\n';
  }
}

DataTable read_csv(std::istream& in) {
  DataTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!have_header && !line.empty() && line.front() == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') {
        body.erase(0, 1);
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        table.metadata.emplace_back(body, "");
      } else {
        table.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      }
      continue;
    }
    if (!have_header) {
      table.columns = split(line, ',');
      if (table.columns.empty() || line.empty()) {
        throw CsvError("line " + std::to_string(line_no) + ": missing header row");
      }
      table.data.assign(table.columns.size(), {});
      have_header = true;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != table.columns.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(table.columns.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      const auto& f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
        throw CsvError("line " + std::to_string(line_no) + ", column '" + table.columns[c] +
                       "': not a number: '" + f + "'");
      }
      table.data[c].push_back(value);
    }
  }
  if (!have_header) {
    throw CsvError("no header row found");
  }
  return table;
}

void write_json(std::ostream& out, const DataTable& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) {
    doc["metadata"][key] = value;
  }
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      row.push_back(table.data[c][r]);
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << '\n';
}

}  // namespace cavlat::cli
