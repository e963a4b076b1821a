#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "cuspbc/coalescence.hpp"
#include "cuspbc/special_functions.hpp"

namespace cuspbc {

/// Coefficients of the regular expansion u(r) = sum_k a_k r^k of the
/// spherically averaged coalescence problem.
struct CuspSeries {
  int ell = 0;
  double alpha = 0.0;    // M q1 q2
  double beta_sq = 0.0;  // 2 M (W0 - E)
  std::vector<double> coeffs;

  /// First-order cusp coefficient a = a1/a0.
  double a() const { return coeffs.at(1) / coeffs.at(0); }
  /// Second-order cusp coefficient b = a2/a0.
  double b() const { return coeffs.at(2) / coeffs.at(0); }
  /// Horner evaluation of the truncated series.
  double evaluate(double r) const;
};

/// u(r) = u0 e^{-beta r} 1F1(ell + 1 + alpha/beta; 2 ell + 2; 2 beta r).
struct LocalWavefunction {
  int ell = 0;
  int m = 0;
  double u0 = 1.0;
  double alpha = 0.0;
  double beta = 1.0;

  /// Throws DomainError unless |m| <= ell and beta > 0.
  void validate() const;
  double kummer_a() const { return ell + 1 + alpha / beta; }
  double kummer_b() const { return 2.0 * ell + 2.0; }
};

/// a = M q1 q2 / (ell + 1). ParityError if the spin channel forbids ell.
double cusp_a(const CoalescencePair& pair, int ell);

/// b = [(ell + 1) a^2 + M (W0 - E)] / (2 ell + 3).
double cusp_b(const CoalescencePair& pair, int ell, double w0, double e);

/// a0 = 1, a1 = alpha/(ell+1),
/// a_{k+1} = (2 alpha a_k + beta^2 a_{k-1}) / ((2 ell + 2 + k)(k + 1)).
/// Returns a0..a_order. DomainError if order < 2.
CuspSeries cusp_series(const CoalescencePair& pair, int ell, double w0, double e,
                       int order);

/// Same recurrence from raw parameters.
CuspSeries cusp_series(int ell, double alpha, double beta_sq, int order);

/// Builds the local wave function for E < W0. RegimeError when E >= W0.
LocalWavefunction make_local_wavefunction(const CoalescencePair& pair, int ell,
                                          int m, double w0, double e,
                                          double u0 = 1.0);

double local_u(const LocalWavefunction& lw, double r, const EvalDomain& dom = {});

/// r^ell u(r) Y_lm(theta, phi).
std::complex<double> local_psi(const LocalWavefunction& lw, double r,
                               double theta, double phi,
                               const EvalDomain& dom = {});

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Largest radius below which q1 q2 / r + W0 < 0. Returns kUnbounded when the
/// potential is negative everywhere and 0 when it is never negative near the
/// origin.
double validity_radius(const CoalescencePair& pair, double w0);

/// Convention r0 = (ell + 1)/|a|; kUnbounded when a = 0.
double effective_bohr_radius(int ell, double a);

}  // namespace cuspbc
