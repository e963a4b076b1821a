#include "cuspbc/cusp_limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cuspbc/errors.hpp"
#include "cuspbc/numeric.hpp"

namespace cuspbc {

namespace {

constexpr double kFirstPassWindow = 0.01;
constexpr double kSecondPassScale = 0.02;
constexpr int kSecondPassTerms = 7;
constexpr int kFallbackPoints = 12;

struct Samples {
  std::vector<double> r;
  std::vector<double> v;
};

CuspFit least_squares(const Samples& s, int ell, int terms = 4) {
  const int n = static_cast<int>(s.r.size());
  const double h = s.r.back();
  Eigen::MatrixXd A(n, terms);
  Eigen::VectorXd y(n);
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) {
    // Fit R / r^ell so the columns are 1, t, t^2, t^3 whatever ell is.
    const double t = s.r[i] / h;
    double p = 1.0;
    for (int k = 0; k < terms; ++k) {
      A(i, k) = p;
      p *= t;
    }
    y(i) = s.v[i] / std::pow(t, ell);
    vmax = std::max(vmax, std::abs(y(i)));
  }
  if (vmax == 0.0) throw FitError("cusp fit: function vanishes near the origin");
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const double cmax = c.head(4).cwiseAbs().maxCoeff();
  if (std::abs(c(0)) <= 1e-6 * cmax) {
    throw FitError(fmt::format(
        "cusp fit: leading r^{} coefficient vanishes (wrong ell supplied?)", ell));
  }
  const double resid = (A * c - y).cwiseAbs().maxCoeff();
  if (resid > 1e-3 * vmax) {
    throw FitError(fmt::format(
        "cusp fit: samples do not behave as r^{} times a smooth function "
        "(relative residual {:.3g})",
        ell, resid / vmax));
  }
  CuspFit fit;
  double hk = std::pow(h, ell);
  for (int k = 0; k < 4; ++k) {
    fit.c[k] = c(k) / hk;
    hk *= h;
  }
  fit.window = h;
  fit.points = n;
  return fit;
}

Samples window(const RadialFunction& f, double rmax) {
  Samples s;
  for (std::size_t i = 0; i < f.grid.size() && f.grid[i] <= rmax; ++i) {
    if (f.grid[i] <= 0.0) continue;
    s.r.push_back(f.grid[i]);
    s.v.push_back(f.values[i]);
  }
  return s;
}

}  // namespace

CuspFit fit_origin(const RadialFunction& input, int ell) {
  if (ell < 0) throw DomainError("cusp fit: ell must be non-negative");
  input.validate();
  const RadialFunction f = input.meaning == RadialMeaning::R
                               ? input
                               : input.as(RadialMeaning::R);
  const int need = ell + 4;

  Samples first = window(f, kFirstPassWindow);
  if (static_cast<int>(first.r.size()) < need) {
    // Coarse grid: take the innermost points available.
    first = window(f, f.grid.back());
    if (static_cast<int>(first.r.size()) > kFallbackPoints) {
      first.r.resize(kFallbackPoints);
      first.v.resize(kFallbackPoints);
    }
    if (static_cast<int>(first.r.size()) < need) {
      throw FitError(fmt::format("cusp fit: need at least {} samples with r > 0", need));
    }
  }
  const CuspFit pass1 = least_squares(first, ell);
  const auto& c = pass1.c;
  double s = std::max({std::abs(c[1] / c[0]), std::sqrt(std::abs(c[2] / c[0])),
                       std::cbrt(std::abs(c[3] / c[0]))});
  if (!(s > 0.0)) s = 1.0;

  Samples second = window(f, kSecondPassScale / s);
  if (static_cast<int>(second.r.size()) >= kFallbackPoints) {
    return least_squares(second, ell, kSecondPassTerms);
  }
  // Too few samples in the fine window: innermost points under the cap.
  const double a = (c[1] / c[0]);
  const double cap = a != 0.0 ? 0.1 * (ell + 1) / std::abs(a) : 0.1;
  Samples inner = window(f, std::max(cap, 0.1 * (ell + 1) / s));
  if (static_cast<int>(inner.r.size()) > kFallbackPoints) {
    inner.r.resize(kFallbackPoints);
    inner.v.resize(kFallbackPoints);
  }
  if (static_cast<int>(inner.r.size()) < need) {
    throw FitError(fmt::format("cusp fit: need at least {} samples near the origin", need));
  }
  return least_squares(inner, ell);
}

double cusp_limit_first(const RadialFunction& f, int ell) {
  const CuspFit fit = fit_origin(f, ell);
  return (ell + 1) * fit.c[1] / fit.c[0];
}

double cusp_limit_second(const RadialFunction& f, int ell) {
  const CuspFit fit = fit_origin(f, ell);
  return (ell + 1.0) * (ell + 2.0) * fit.c[2] / fit.c[0];
}

KatoResult kato_average_check(const AngularRadialFunction& f, const KatoOptions& opt) {
  if (!(opt.r_min > 0.0 && opt.r_max > opt.r_min) || opt.points < 12) {
    throw DomainError("kato check: need 0 < r_min < r_max and at least 12 points");
  }
  const QuadratureRule gl = gauss_legendre(opt.n_theta);
  RadialFunction dir;
  RadialFunction avg;
  const double step = std::log(opt.r_max / opt.r_min) / (opt.points - 1);
  for (int i = 0; i < opt.points; ++i) {
    const double r = opt.r_min * std::exp(i * step);
    dir.grid.push_back(r);
    avg.grid.push_back(r);
    dir.values.push_back(f(r, opt.theta, opt.phi));
    CompensatedSum sum;
    for (int it = 0; it < opt.n_theta; ++it) {
      const double theta = std::acos(gl.nodes[it]);
      for (int ip = 0; ip < opt.n_phi; ++ip) {
        const double phi = 2.0 * std::numbers::pi * ip / opt.n_phi;
        sum += gl.weights[it] * f(r, theta, phi);
      }
    }
    avg.values.push_back(sum.value() / (2.0 * opt.n_phi));
  }
  return {cusp_limit_first(dir, 0), cusp_limit_first(avg, 0)};
}

}  // namespace cuspbc
