#include "cuspbc/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cuspbc/errors.hpp"

namespace cuspbc::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

ojson cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

Cell json_cell(const ojson& j, int line) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError("report: unsupported JSON value", line, 1);
}

Cell parse_cell(const std::string& s) {
  if (s.empty()) return s;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size() && std::isfinite(v)) return v;
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool same_cell(const Cell& a, const Cell& b) {
  auto num = [](const Cell& c, double& v) {
    if (const auto* d = std::get_if<double>(&c)) {
      v = *d;
      return true;
    }
    if (const auto* i = std::get_if<long long>(&c)) {
      v = static_cast<double>(*i);
      return true;
    }
    return false;
  };
  double x = 0.0, y = 0.0;
  const bool nx = num(a, x), ny = num(b, y);
  if (nx != ny) return false;
  if (nx) return x == y;
  return std::get<std::string>(a) == std::get<std::string>(b);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("output format must be 'csv' or 'json', got '" + s + "'");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError(fmt::format("report table '{}': row has {} cells, {} columns", name,
                                  row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

void Report::meta(const std::string& key, Cell value) {
  metadata.emplace_back(key, std::move(value));
}

void Report::meta_number(const std::string& key, double value, bool unbounded) {
  if (std::isinf(value) && value > 0 && unbounded) {
    meta(key, std::string("unbounded"));
  } else if (!std::isfinite(value)) {
    meta(key, format_double(value));
  } else {
    meta(key, value);
  }
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back(Table{name, std::move(columns), {}});
  return tables.back();
}

const Table& Report::find_table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw DomainError("report: no table named '" + name + "'");
}

const Cell& Report::find_meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  throw DomainError("report: no metadata key '" + key + "'");
}

void write_csv(std::ostream& os, const Report& r) {
  os << "# command=" << r.command << '\n';
  for (const auto& [k, v] : r.metadata) os << "# " << k << '=' << cell_text(v) << '\n';
  for (std::size_t t = 0; t < r.tables.size(); ++t) {
    const Table& tab = r.tables[t];
    if (t > 0) os << '\n';
    os << "# table=" << tab.name << '\n';
    for (std::size_t c = 0; c < tab.columns.size(); ++c) os << (c ? "," : "") << tab.columns[c];
    os << '\n';
    for (const auto& row : tab.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
      os << '\n';
    }
  }
}

void write_json(std::ostream& os, const Report& r) {
  // One row per line keeps large tables readable and diffable.
  ojson meta = ojson::object();
  for (const auto& [k, v] : r.metadata) meta[k] = cell_json(v);
  os << "{\n \"command\": " << ojson(r.command).dump() << ",\n";
  os << " \"metadata\": " << meta.dump() << ",\n";
  os << " \"tables\": {";
  for (std::size_t t = 0; t < r.tables.size(); ++t) {
    const Table& tab = r.tables[t];
    os << (t ? ",\n" : "\n") << "  " << ojson(tab.name).dump() << ": {\"columns\": "
       << ojson(tab.columns).dump() << ", \"rows\": [";
    for (std::size_t i = 0; i < tab.rows.size(); ++i) {
      ojson jr = ojson::array();
      for (const auto& c : tab.rows[i]) jr.push_back(cell_json(c));
      os << (i ? ",\n" : "\n") << "   " << jr.dump();
    }
    os << (tab.rows.empty() ? "]}" : "\n  ]}");
  }
  os << (r.tables.empty() ? "}\n}\n" : "\n }\n}\n");
}

void write_report(std::ostream& os, const Report& r, Format f) {
  if (f == Format::csv) {
    write_csv(os, r);
  } else {
    write_json(os, r);
  }
}

Report read_csv_report(std::istream& is) {
  Report r;
  std::string line;
  int lineno = 0;
  Table* cur = nullptr;
  bool need_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("report: metadata line without '='", lineno, 3);
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "command") {
        r.command = val;
      } else if (key == "table") {
        r.tables.push_back(Table{val, {}, {}});
        cur = &r.tables.back();
        need_header = true;
      } else {
        r.meta(key, parse_cell(val));
      }
      continue;
    }
    if (!cur) throw ParseError("report: data before any '# table=' line", lineno, 1);
    auto cells = split_csv(line);
    if (need_header) {
      cur->columns = cells;
      need_header = false;
      continue;
    }
    if (cells.size() != cur->columns.size()) {
      throw ParseError("report: row width does not match the header", lineno, 1);
    }
    std::vector<Cell> row;
    for (const auto& c : cells) row.push_back(parse_cell(c));
    cur->rows.push_back(std::move(row));
  }
  return r;
}

Report read_json_report(std::istream& is) {
  ojson j;
  try {
    j = ojson::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  Report r;
  r.command = j.at("command").get<std::string>();
  for (const auto& [k, v] : j.at("metadata").items()) {
    Cell c = json_cell(v, 1);
    if (const auto* s = std::get_if<std::string>(&c)) c = parse_cell(*s);
    r.meta(k, c);
  }
  for (const auto& [name, t] : j.at("tables").items()) {
    Table tab{name, t.at("columns").get<std::vector<std::string>>(), {}};
    for (const auto& row : t.at("rows")) {
      std::vector<Cell> cells;
      for (const auto& c : row) {
        Cell cell = json_cell(c, 1);
        if (const auto* s = std::get_if<std::string>(&cell)) cell = parse_cell(*s);
        cells.push_back(cell);
      }
      tab.rows.push_back(std::move(cells));
    }
    r.tables.push_back(std::move(tab));
  }
  return r;
}

bool same_content(const Report& a, const Report& b) {
  if (a.command != b.command || a.metadata.size() != b.metadata.size() ||
      a.tables.size() != b.tables.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.metadata.size(); ++i) {
    if (a.metadata[i].first != b.metadata[i].first) return false;
    if (!same_cell(a.metadata[i].second, b.metadata[i].second)) return false;
  }
  for (std::size_t t = 0; t < a.tables.size(); ++t) {
    const auto& x = a.tables[t];
    const auto& y = b.tables[t];
    if (x.name != y.name || x.columns != y.columns || x.rows.size() != y.rows.size()) return false;
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
      if (x.rows[i].size() != y.rows[i].size()) return false;
      for (std::size_t c = 0; c < x.rows[i].size(); ++c) {
        if (!same_cell(x.rows[i][c], y.rows[i][c])) return false;
      }
    }
  }
  return true;
}

}  // namespace cuspbc::cli
