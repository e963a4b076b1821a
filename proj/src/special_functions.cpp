#include "cuspbc/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cuspbc/errors.hpp"

namespace cuspbc {

void EvalDomain::validate() const {
  if (max_terms < 1) throw DomainError("EvalDomain: max_terms must be >= 1");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("EvalDomain: rel_tol must lie in (0, 1)");
  }
}

double pochhammer(double a, int k) {
  if (k < 0) throw DomainError("pochhammer: k must be non-negative");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

namespace {

bool is_non_positive_integer(double b) {
  return b <= 0.0 && std::floor(b) == b;
}

}  // namespace

double kummer_1f1_series(double a, double b, double x, const EvalDomain& dom) {
  dom.validate();
  if (is_non_positive_integer(b)) {
    throw PoleError("kummer_1f1: b = " + std::to_string(b) + " is a pole");
  }
  double term = 1.0;
  double sum = 1.0;
  int small_run = 0;
  for (int k = 0; k < dom.max_terms; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1);
    sum += term;
    if (term == 0.0) return sum;  // terminating series, a a non-positive integer
    if (std::abs(term) <= dom.rel_tol * std::abs(sum)) {
      if (++small_run == 2) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NoConvergence("kummer_1f1: series did not converge within " +
                      std::to_string(dom.max_terms) + " terms");
}

double kummer_1f1(double a, double b, double x, const EvalDomain& dom) {
  // Polynomials are summed directly; Kummer's transformation would turn them
  // into an infinite series.
  if (x < 0.0 && !is_non_positive_integer(a)) {
    return std::exp(x) * kummer_1f1_series(b - a, b, -x, dom);
  }
  return kummer_1f1_series(a, b, x, dom);
}

double legendre_p(int lambda, double x) {
  if (lambda < 0) throw DomainError("legendre_p: degree must be non-negative");
  if (!(std::abs(x) <= 1.0)) throw DomainError("legendre_p: |x| > 1");
  if (lambda == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= lambda; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

// Normalized associated Legendre function
// sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta), m >= 0, including the
// Condon-Shortley phase.
double normalized_assoc_legendre(int l, int m, double theta) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  // Start from the sectoral term  N_mm P_m^m.
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int k = 1; k <= m; ++k) {
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  }
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  if (l == m + 1) return pm1;
  double pll = 0.0;
  for (int k = m + 2; k <= l; ++k) {
    const double a = std::sqrt((4.0 * k * k - 1.0) / (double(k * k) - double(m * m)));
    const double b = std::sqrt(((k - 1.0) * (k - 1.0) - double(m * m)) /
                               (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
    pll = a * (x * pm1 - b * pmm);
    pmm = pm1;
    pm1 = pll;
  }
  return pll;
}

void check_lm(int l, int m) {
  if (l < 0 || l > kMaxHarmonicDegree) {
    throw DomainError("spherical_harmonic: l outside [0, 12]");
  }
  if (std::abs(m) > l) throw DomainError("spherical_harmonic: |m| > l");
}

}  // namespace

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  check_lm(l, m);
  const int am = std::abs(m);
  const double p = normalized_assoc_legendre(l, am, theta);
  std::complex<double> y = p * std::polar(1.0, am * phi);
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  check_lm(l, m);
  if (m == 0) return spherical_harmonic(l, 0, theta, phi).real();
  const auto y = spherical_harmonic(l, std::abs(m), theta, phi);
  return m > 0 ? std::numbers::sqrt2 * y.real() : std::numbers::sqrt2 * y.imag();
}

}  // namespace cuspbc
