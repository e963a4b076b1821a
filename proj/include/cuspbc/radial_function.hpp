#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cuspbc {

/// R is the full radial function, u the reduced one with R = r^ell u.
enum class RadialMeaning { R, u };

const char* to_string(RadialMeaning m);
RadialMeaning radial_meaning_from_string(const std::string& s);

/// Tabulated radial function.
struct RadialFunction {
  std::vector<double> grid;
  std::vector<double> values;
  int ell = 0;
  RadialMeaning meaning = RadialMeaning::R;

  /// Throws DomainError unless the grid is strictly increasing, sizes match,
  /// values are finite and ell >= 0.
  void validate() const;

  /// Copy converted to the requested meaning (requires r > 0 for R -> u).
  RadialFunction as(RadialMeaning target) const;

  std::size_t size() const { return grid.size(); }
};

/// CSV with header `r,value,ell,meaning`, one row per grid point.
void write_radial_csv(std::ostream& os, const RadialFunction& f);
RadialFunction read_radial_csv(std::istream& is);

}  // namespace cuspbc
