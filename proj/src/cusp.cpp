#include "cuspbc/cusp.hpp"

#include <cmath>

#include "cuspbc/errors.hpp"

namespace cuspbc {

double CuspSeries::evaluate(double r) const {
  double s = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * r + *it;
  return s;
}

void LocalWavefunction::validate() const {
  if (ell < 0) throw DomainError("local wave function: ell must be non-negative");
  if (std::abs(m) > ell) throw DomainError("local wave function: |m| > ell");
  if (!(beta > 0.0)) throw RegimeError("local wave function: beta must be positive");
}

double cusp_a(const CoalescencePair& pair, int ell) {
  pair.validate();
  pair.check_ell(ell);
  return pair.alpha() / (ell + 1);
}

double cusp_b(const CoalescencePair& pair, int ell, double w0, double e) {
  const double a = cusp_a(pair, ell);
  return ((ell + 1) * a * a + pair.reduced_mass() * (w0 - e)) / (2 * ell + 3);
}

CuspSeries cusp_series(int ell, double alpha, double beta_sq, int order) {
  if (ell < 0) throw DomainError("cusp_series: ell must be non-negative");
  if (order < 2) throw DomainError("cusp_series: order must be at least 2");
  CuspSeries s;
  s.ell = ell;
  s.alpha = alpha;
  s.beta_sq = beta_sq;
  s.coeffs.resize(order + 1);
  s.coeffs[0] = 1.0;
  s.coeffs[1] = alpha / (ell + 1);
  for (int k = 1; k < order; ++k) {
    s.coeffs[k + 1] = (2.0 * alpha * s.coeffs[k] + beta_sq * s.coeffs[k - 1]) /
                      ((2.0 * ell + 2.0 + k) * (k + 1.0));
  }
  return s;
}

CuspSeries cusp_series(const CoalescencePair& pair, int ell, double w0, double e,
                       int order) {
  pair.validate();
  pair.check_ell(ell);
  const double M = pair.reduced_mass();
  return cusp_series(ell, pair.alpha(), 2.0 * M * (w0 - e), order);
}

LocalWavefunction make_local_wavefunction(const CoalescencePair& pair, int ell,
                                          int m, double w0, double e, double u0) {
  pair.validate();
  pair.check_ell(ell);
  if (!(e < w0)) {
    throw RegimeError("local wave function needs E < W0 (bound-state regime)");
  }
  LocalWavefunction lw;
  lw.ell = ell;
  lw.m = m;
  lw.u0 = u0;
  lw.alpha = pair.alpha();
  lw.beta = std::sqrt(2.0 * pair.reduced_mass() * (w0 - e));
  lw.validate();
  return lw;
}

double local_u(const LocalWavefunction& lw, double r, const EvalDomain& dom) {
  lw.validate();
  if (r < 0.0) throw DomainError("local_u: r must be non-negative");
  const double x = 2.0 * lw.beta * r;
  return lw.u0 * std::exp(-lw.beta * r) * kummer_1f1(lw.kummer_a(), lw.kummer_b(), x, dom);
}

std::complex<double> local_psi(const LocalWavefunction& lw, double r,
                               double theta, double phi, const EvalDomain& dom) {
  const double radial = std::pow(r, lw.ell) * local_u(lw, r, dom);
  return radial * spherical_harmonic(lw.ell, lw.m, theta, phi);
}

double validity_radius(const CoalescencePair& pair, double w0) {
  const double qq = pair.charge_product();
  if (qq < 0.0) return w0 > 0.0 ? -qq / w0 : kUnbounded;
  if (qq == 0.0) return w0 < 0.0 ? kUnbounded : 0.0;
  // Repulsive pair: the potential is positive near the origin, so there is no
  // bound region attached to the coalescence point.
  return 0.0;
}

double effective_bohr_radius(int ell, double a) {
  if (a == 0.0) return kUnbounded;
  return (ell + 1) / std::abs(a);
}

}  // namespace cuspbc
