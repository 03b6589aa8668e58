#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cavlat::cli {

/// Malformed data file.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column-oriented numeric table with ordered `key=value` metadata.
struct DataTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[c][row]

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  void add_column(std::string name, std::vector<double> values);
  /// Index of `name`; throws CsvError naming the column when absent.
  std::size_t column_index(const std::string& name) const;
  const std::string* find_metadata(const std::string& key) const;
};

/// `# key=value` lines, a header row, then one row per sample. Numbers use
/// the shortest decimal form that round-trips.
void write_csv(std::ostream& out, const DataTable& table);
DataTable read_csv(std::istream& in);

/// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}
void write_json(std::ostream& out, const DataTable& table);

}  // namespace cavlat::cli
