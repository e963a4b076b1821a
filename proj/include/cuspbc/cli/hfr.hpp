#pragma once

#include <iosfwd>
#include <vector>

namespace cuspbc::cli {

/// One normalized Slater primitive N r^(n-1) e^(-zeta r),
/// N = (2 zeta)^(n + 1/2) / sqrt((2n)!).
struct StoTerm {
  int n = 1;
  double zeta = 1.0;
  double c = 1.0;
};

/// Single radial orbital R(r) = sum_i c_i N_i r^(n_i - 1) e^(-zeta_i r).
struct HfrOrbital {
  std::vector<StoTerm> terms;

  void validate() const;
  double operator()(double r) const;
  /// int R^2 r^2 dr, analytic.
  double norm() const;
  /// <1/r> = int R^2 r dr / int R^2 r^2 dr by composite Gauss-Legendre.
  double mean_inverse_r() const;
  /// Radius of the maximum of r^2 R^2 (golden-section refinement of a scan).
  double density_maximum() const;
};

double sto_normalization(int n, double zeta);

/// Text format: '#' comment lines, then data lines `n zeta c`.
HfrOrbital read_hfr(std::istream& is);
void write_hfr(std::ostream& os, const HfrOrbital& orb);

}  // namespace cuspbc::cli
