#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "cuspbc/errors.hpp"
#include "cuspbc/special_functions.hpp"

using namespace cuspbc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("pochhammer examples", "[special_fn]") {
  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(1.0, 4) == 24.0);
  CHECK(pochhammer(-2.0, 4) == 0.0);
  CHECK_THROWS_AS(pochhammer(1.0, -1), DomainError);
}

TEST_CASE("kummer_1f1 examples", "[special_fn]") {
  CHECK(kummer_1f1(0.3, 1.7, 0.0) == 1.0);
  CHECK_THAT(kummer_1f1(1.0, 1.0, 1.0), WithinRel(std::numbers::e, 1e-15));
  for (double x : {-7.0, -0.5, 0.0, 3.0, 25.0}) CHECK(kummer_1f1(0.0, 2.0, x) == 1.0);
}

TEST_CASE("kummer_1f1 errors", "[special_fn]") {
  CHECK_THROWS_AS(kummer_1f1(1.0, 0.0, 1.0), PoleError);
  CHECK_THROWS_AS(kummer_1f1(1.0, -3.0, 1.0), PoleError);
  CHECK_THROWS_AS(kummer_1f1(1.0, 1.5, 30.0, EvalDomain{5, 1e-14}), NoConvergence);
  CHECK_THROWS_AS(kummer_1f1(1.0, 1.5, 1.0, EvalDomain{0, 1e-14}), DomainError);
  CHECK_THROWS_AS(kummer_1f1(1.0, 1.5, 1.0, EvalDomain{10, 1.5}), DomainError);
}

TEST_CASE("kummer_1f1 against an independent implementation", "[special_fn]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(-4.0, 4.0), ub(0.2, 6.0), ux(-20.0, 20.0);
  for (int i = 0; i < 300; ++i) {
    const double a = ua(rng), b = ub(rng), x = ux(rng);
    const double ref = boost::math::hypergeometric_1F1(a, b, x);
    const double got = kummer_1f1(a, b, x);
    // Relative to the magnitude of the largest term is the meaningful scale
    // when the sum cancels; use an absolute floor tied to e^{|x|} growth.
    CHECK_THAT(got, WithinAbs(ref, 1e-11 * std::max(1.0, std::abs(ref)) +
                                       1e-13 * std::exp(std::max(0.0, x))));
  }
}

// Largest |term| of the 1F1 series; rounding in the summed series is bounded
// by a few ulps of this.
double largest_term(double a, double b, double x) {
  double scale = 0.0;
  double term = 1.0;
  for (int k = 0; k < 500; ++k) {
    scale = std::max(scale, std::abs(term));
    term *= (a + k) / (b + k) * x / (k + 1);
  }
  return scale;
}

TEST_CASE("series and Kummer-transformed evaluation agree", "[special_fn]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.5, 5.0), ux(-30.0, 30.0);
  const EvalDomain dom{500, 1e-14};
  for (int i = 0; i < 500; ++i) {
    const double a = ua(rng), b = ub(rng), x = ux(rng);
    const double direct = kummer_1f1_series(a, b, x, dom);
    const double transformed = std::exp(x) * kummer_1f1_series(b - a, b, -x, dom);
    // One of the two series alternates; agreement is measured against the
    // largest term either evaluation had to sum.
    const double scale = std::max(largest_term(a, b, x), std::exp(x) * largest_term(b - a, b, -x));
    CHECK_THAT(direct, WithinAbs(transformed, 10 * dom.rel_tol * scale));
    if (std::abs(direct) > 0.5 * scale) {
      CHECK_THAT(direct, WithinRel(transformed, 10 * dom.rel_tol * scale / std::abs(direct)));
    }
  }
}

TEST_CASE("derivative identity d/dx 1F1 = (a/b) 1F1(a+1; b+1)", "[special_fn]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.5, 5.0), ux(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double a = ua(rng), b = ub(rng), x = ux(rng);
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    const double fd = (kummer_1f1(a, b, x - 2 * h) - 8 * kummer_1f1(a, b, x - h) +
                       8 * kummer_1f1(a, b, x + h) - kummer_1f1(a, b, x + 2 * h)) /
                      (12 * h);
    const double exact = a / b * kummer_1f1(a + 1, b + 1, x);
    if (std::abs(exact) > 1e-6) CHECK_THAT(fd, WithinRel(exact, 1e-7));
  }
}

TEST_CASE("legendre_p examples and explicit polynomials", "[special_fn]") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(1, 0.5) == 0.5);
  for (int l = 0; l < 10; ++l) CHECK_THAT(legendre_p(l, 1.0), WithinAbs(1.0, 1e-15));
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    CHECK_THAT(legendre_p(2, x), WithinAbs((3 * x * x - 1) / 2, 1e-14));
    CHECK_THAT(legendre_p(3, x), WithinAbs((5 * x * x * x - 3 * x) / 2, 1e-14));
    CHECK_THAT(legendre_p(4, x), WithinAbs((35 * std::pow(x, 4) - 30 * x * x + 3) / 8, 1e-14));
  }
  CHECK_THROWS_AS(legendre_p(2, 1.0001), DomainError);
}

TEST_CASE("spherical harmonic examples", "[special_fn]") {
  CHECK_THAT(std::abs(spherical_harmonic(0, 0, 0.4, 1.1) - 1.0 / std::sqrt(4 * std::numbers::pi)),
             WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(spherical_harmonic(1, 0, std::numbers::pi / 2, 0.0)), WithinAbs(0.0, 1e-15));
  // Y_11 = -sqrt(3/8pi) sin(theta) e^{i phi}
  const auto y11 = spherical_harmonic(1, 1, 0.7, 0.3);
  const auto ref = -std::sqrt(3.0 / (8 * std::numbers::pi)) * std::sin(0.7) * std::polar(1.0, 0.3);
  CHECK_THAT(std::abs(y11 - ref), WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(spherical_harmonic(2, 3, 0.1, 0.1), DomainError);
  CHECK_THROWS_AS(spherical_harmonic(13, 0, 0.1, 0.1), DomainError);
}

TEST_CASE("addition theorem", "[special_fn]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ut(0.0, std::numbers::pi), up(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = ut(rng), p1 = up(rng), t2 = ut(rng), p2 = up(rng);
    const double cg = std::cos(t1) * std::cos(t2) + std::sin(t1) * std::sin(t2) * std::cos(p1 - p2);
    for (int l = 0; l <= 6; ++l) {
      std::complex<double> s = 0.0;
      for (int m = -l; m <= l; ++m) {
        s += spherical_harmonic(l, m, t1, p1) * std::conj(spherical_harmonic(l, m, t2, p2));
      }
      s *= 4 * std::numbers::pi / (2 * l + 1);
      CHECK_THAT(s.real(), WithinAbs(legendre_p(l, std::clamp(cg, -1.0, 1.0)), 1e-13));
      CHECK_THAT(s.imag(), WithinAbs(0.0, 1e-13));
    }
  }
}

TEST_CASE("inversion parity of spherical harmonics", "[special_fn]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(0.0, std::numbers::pi), up(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = ut(rng), p = up(rng);
    for (int l = 0; l <= 8; ++l) {
      for (int m = -l; m <= l; ++m) {
        const auto a = spherical_harmonic(l, m, std::numbers::pi - t, std::numbers::pi + p);
        const auto b = (l % 2 ? -1.0 : 1.0) * spherical_harmonic(l, m, t, p);
        CHECK_THAT(std::abs(a - b), WithinAbs(0.0, 1e-13));
      }
    }
  }
}

TEST_CASE("spherical harmonics are orthonormal", "[special_fn]") {
  // Product Gauss-Legendre x trapezoid quadrature, exact for these degrees.
  const int nt = 40, np = 40;
  std::vector<double> x(nt), w(nt);
  {
    // Nodes from Newton on P_nt, independent of the library's rule.
    for (int i = 0; i < nt; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (nt + 0.5));
      for (int it = 0; it < 50; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= nt; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = nt * (z * p1 - p0) / (z * z - 1);
        z -= p1 / dp;
        w[i] = 2 / ((1 - z * z) * dp * dp);
      }
      x[i] = z;
    }
  }
  for (int l1 = 0; l1 <= 4; ++l1) {
    for (int m1 = -l1; m1 <= l1; ++m1) {
      for (int l2 = 0; l2 <= 4; ++l2) {
        for (int m2 = -l2; m2 <= l2; ++m2) {
          std::complex<double> s = 0.0;
          for (int i = 0; i < nt; ++i) {
            for (int j = 0; j < np; ++j) {
              const double phi = 2 * std::numbers::pi * j / np;
              s += w[i] * (2 * std::numbers::pi / np) *
                   std::conj(spherical_harmonic(l1, m1, std::acos(x[i]), phi)) *
                   spherical_harmonic(l2, m2, std::acos(x[i]), phi);
            }
          }
          const double expect = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
          CHECK_THAT(std::abs(s - expect), WithinAbs(0.0, 1e-12));
        }
      }
    }
  }
}

TEST_CASE("real spherical harmonics", "[special_fn]") {
  const double t = 0.9, p = 2.1;
  CHECK_THAT(real_spherical_harmonic(2, 0, t, p), WithinAbs(spherical_harmonic(2, 0, t, p).real(), 1e-15));
  CHECK_THAT(real_spherical_harmonic(2, 1, t, p),
             WithinAbs(std::sqrt(2.0) * spherical_harmonic(2, 1, t, p).real(), 1e-15));
  CHECK_THAT(real_spherical_harmonic(2, -1, t, p),
             WithinAbs(std::sqrt(2.0) * spherical_harmonic(2, 1, t, p).imag(), 1e-15));
}
