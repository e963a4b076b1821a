#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cuspbc::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

Format format_from_string(const std::string& s);

/// Ordered metadata plus named tables; the common output of every subcommand.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> metadata;
  std::vector<Table> tables;

  void meta(const std::string& key, Cell value);
  /// Non-finite doubles are stored as "inf", "-inf" or "nan" strings, and an
  /// infinite radius as "unbounded" when `unbounded` is set.
  void meta_number(const std::string& key, double value, bool unbounded = false);
  Table& table(const std::string& name, std::vector<std::string> columns);
  const Table& find_table(const std::string& name) const;
  const Cell& find_meta(const std::string& key) const;
};

/// CSV: `# command=..`, `# key=value` lines, then per table `# table=name`,
/// a header row and data rows, tables separated by a blank line.
/// Doubles use %.17g.
void write_csv(std::ostream& os, const Report& r);
/// {"command": .., "metadata": {..}, "tables": {name: {"columns": [..], "rows": [[..]]}}}
void write_json(std::ostream& os, const Report& r);
void write_report(std::ostream& os, const Report& r, Format f);

/// Readers for round-trip checks. CSV cells that parse fully as numbers come
/// back as doubles; JSON integers come back as long long.
Report read_csv_report(std::istream& is);
Report read_json_report(std::istream& is);

/// Numeric content equality: numbers compared as doubles (bitwise), strings
/// verbatim.
bool same_content(const Report& a, const Report& b);

std::string format_double(double x);

}  // namespace cuspbc::cli
