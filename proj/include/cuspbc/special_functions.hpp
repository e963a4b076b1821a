#pragma once

#include <complex>

namespace cuspbc {

/// Truncation control for power series.
struct EvalDomain {
  int max_terms = 500;
  double rel_tol = 1e-14;

  /// Throws DomainError unless max_terms >= 1 and 0 < rel_tol < 1.
  void validate() const;
};

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
double pochhammer(double a, int k);

/// Kummer confluent hypergeometric function 1F1(a; b; x).
///
/// Negative arguments are routed through Kummer's transformation
/// 1F1(a; b; x) = e^x 1F1(b-a; b; -x), so the summed series never alternates
/// because of x. Throws PoleError for b in {0, -1, -2, ...} and NoConvergence
/// when the series does not settle within dom.max_terms terms.
double kummer_1f1(double a, double b, double x, const EvalDomain& dom = {});

/// Direct power series for 1F1 with no transformation, for any sign of x.
double kummer_1f1_series(double a, double b, double x, const EvalDomain& dom = {});

/// Legendre polynomial P_lambda(x) by Bonnet's recurrence. |x| <= 1.
double legendre_p(int lambda, double x);

/// Complex spherical harmonic with the Condon-Shortley phase, orthonormal on
/// the unit sphere. Supports 0 <= l <= 12, |m| <= l.
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

/// Real spherical harmonic: sqrt(2) Re Y_l|m| for m > 0, Y_l0, sqrt(2) Im Y_l|m|
/// for m < 0 (signs follow the Condon-Shortley convention of the complex form).
double real_spherical_harmonic(int l, int m, double theta, double phi);

inline constexpr int kMaxHarmonicDegree = 12;

}  // namespace cuspbc
