#include "cuspbc/radial_function.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cuspbc/errors.hpp"

namespace cuspbc {

const char* to_string(RadialMeaning m) { return m == RadialMeaning::R ? "R" : "u"; }

RadialMeaning radial_meaning_from_string(const std::string& s) {
  if (s == "R") return RadialMeaning::R;
  if (s == "u") return RadialMeaning::u;
  throw DomainError("radial meaning must be 'R' or 'u', got '" + s + "'");
}

void RadialFunction::validate() const {
  if (ell < 0) throw DomainError("radial function: ell must be non-negative");
  if (grid.size() != values.size()) {
    throw DomainError("radial function: grid and values differ in length");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
      throw DomainError(fmt::format("radial function: non-finite entry at index {}", i));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError("radial function: grid must be strictly increasing");
    }
  }
}

RadialFunction RadialFunction::as(RadialMeaning target) const {
  RadialFunction out = *this;
  if (target == meaning || ell == 0) {
    out.meaning = target;
    return out;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = std::pow(grid[i], ell);
    if (target == RadialMeaning::R) {
      out.values[i] = values[i] * p;
    } else {
      if (!(grid[i] > 0.0)) {
        throw DomainError("radial function: cannot divide by r^ell at r = 0");
      }
      out.values[i] = values[i] / p;
    }
  }
  out.meaning = target;
  return out;
}

void write_radial_csv(std::ostream& os, const RadialFunction& f) {
  fmt::print(os, "r,value,ell,meaning\n");
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    fmt::print(os, "{:.17g},{:.17g},{},{}\n", f.grid[i], f.values[i], f.ell,
               to_string(f.meaning));
  }
}

RadialFunction read_radial_csv(std::istream& is) {
  RadialFunction f;
  std::string line;
  int lineno = 0;
  bool header = false;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("r,value,ell,meaning", 0) != 0) {
        throw ParseError("expected header 'r,value,ell,meaning'", lineno, 1);
      }
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field[4];
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(ss, field[k], ',')) {
        throw ParseError("expected 4 comma-separated fields", lineno, 1);
      }
    }
    double r = 0.0;
    double v = 0.0;
    int ell = 0;
    try {
      std::size_t pos = 0;
      r = std::stod(field[0], &pos);
      v = std::stod(field[1], &pos);
      ell = std::stoi(field[2], &pos);
    } catch (const std::exception&) {
      throw ParseError("malformed number", lineno, 1);
    }
    RadialMeaning m;
    try {
      m = radial_meaning_from_string(field[3]);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), lineno, static_cast<int>(line.rfind(',')) + 2);
    }
    if (first) {
      f.ell = ell;
      f.meaning = m;
      first = false;
    } else if (ell != f.ell || m != f.meaning) {
      throw ParseError("ell and meaning must be constant across rows", lineno, 1);
    }
    f.grid.push_back(r);
    f.values.push_back(v);
  }
  if (!header) throw ParseError("missing header", lineno, 1);
  f.validate();
  return f;
}

}  // namespace cuspbc
