#pragma once

#include <array>
#include <functional>

#include "cuspbc/radial_function.hpp"

namespace cuspbc {

/// Least-squares coefficients of R(r) ~ c0 r^ell + c1 r^(ell+1) + c2 r^(ell+2)
/// + c3 r^(ell+3) near the origin.
struct CuspFit {
  std::array<double, 4> c{};
  double window = 0.0;  // largest r used
  int points = 0;
};

/// Two-pass origin fit. The first pass on r <= 0.01 sets the local length
/// scale s; the second fits seven terms to every sample with r <= 0.02/s, or
/// four terms to the innermost 12 samples below 0.1 (ell+1)/|a| when fewer
/// than 12 samples fall in that window.
/// FitError with fewer than ell + 4 usable samples, when c0 vanishes (wrong
/// ell), or when the data is not of the form r^ell * (smooth).
CuspFit fit_origin(const RadialFunction& f, int ell);

/// (ell + 1) c1/c0, the limit of d^{ell+1}R / d^ell R (times ell!/(ell+1)!
/// factors folded in) at the origin; equals (ell+1) a for cusp-correct data.
double cusp_limit_first(const RadialFunction& f, int ell);

/// (ell + 1)(ell + 2) c2/c0; equals (ell+1)(ell+2) b for cusp-correct data.
double cusp_limit_second(const RadialFunction& f, int ell);

/// f(r, theta, phi).
using AngularRadialFunction = std::function<double(double, double, double)>;

struct KatoOptions {
  double theta = 0.0;
  double phi = 0.0;
  double r_min = 1e-6;
  double r_max = 0.05;
  int points = 400;
  int n_theta = 64;
  int n_phi = 128;
};

struct KatoResult {
  double directional = 0.0;
  double averaged = 0.0;
};

/// Radial log-derivative limit of an ell = 0 function along one direction and
/// of its spherical average, both from fit_origin on a log grid.
KatoResult kato_average_check(const AngularRadialFunction& f, const KatoOptions& opt = {});

}  // namespace cuspbc
