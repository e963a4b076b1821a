#include "cuspbc/cli/hfr.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cuspbc/errors.hpp"
#include "cuspbc/numeric.hpp"

namespace cuspbc::cli {

namespace {

double min_zeta(const HfrOrbital& orb) {
  double z = orb.terms.front().zeta;
  for (const auto& t : orb.terms) z = std::min(z, t.zeta);
  return z;
}

// Composite Gauss-Legendre of f on [0, r_max].
template <class F>
double integrate(F f, double r_max) {
  static const QuadratureRule rule = gauss_legendre(24);
  constexpr int kPanels = 80;
  const double h = r_max / kPanels;
  CompensatedSum sum;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += 0.5 * h * rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
  }
  return sum.value();
}

}  // namespace

double sto_normalization(int n, double zeta) {
  return std::pow(2.0 * zeta, n + 0.5) / std::sqrt(std::tgamma(2.0 * n + 1.0));
}

void HfrOrbital::validate() const {
  if (terms.empty()) throw DomainError("HFR orbital: needs at least one term");
  for (const auto& t : terms) {
    if (t.n < 1) throw DomainError("HFR orbital: principal number must be >= 1");
    if (!(t.zeta > 0.0) || !std::isfinite(t.zeta)) throw DomainError("HFR orbital: zeta must be positive");
    if (!std::isfinite(t.c)) throw DomainError("HFR orbital: non-finite coefficient");
  }
}

double HfrOrbital::operator()(double r) const {
  CompensatedSum s;
  for (const auto& t : terms) {
    s += t.c * sto_normalization(t.n, t.zeta) * std::pow(r, t.n - 1) * std::exp(-t.zeta * r);
  }
  return s.value();
}

double HfrOrbital::norm() const {
  CompensatedSum s;
  for (const auto& a : terms) {
    for (const auto& b : terms) {
      const int p = a.n + b.n;
      const double z = a.zeta + b.zeta;
      s += a.c * b.c * sto_normalization(a.n, a.zeta) * sto_normalization(b.n, b.zeta) *
           std::tgamma(p + 1.0) / std::pow(z, p + 1);
    }
  }
  return s.value();
}

double HfrOrbital::mean_inverse_r() const {
  validate();
  const double r_max = 80.0 / min_zeta(*this);
  const double num = integrate([&](double r) { const double v = (*this)(r); return v * v * r; }, r_max);
  const double den = integrate([&](double r) { const double v = (*this)(r); return v * v * r * r; }, r_max);
  return num / den;
}

double HfrOrbital::density_maximum() const {
  validate();
  const double r_max = 40.0 / min_zeta(*this);
  constexpr int kScan = 4000;
  auto neg_density = [&](double r) { const double v = (*this)(r); return -(r * r * v * v); };
  int best = 1;
  double fbest = neg_density(r_max / kScan);
  for (int i = 2; i <= kScan; ++i) {
    const double f = neg_density(r_max * i / kScan);
    if (f < fbest) {
      fbest = f;
      best = i;
    }
  }
  const double lo = r_max * (best - 1) / kScan;
  const double hi = r_max * (best + 1) / kScan;
  return boost::math::tools::brent_find_minima(neg_density, lo, hi, 52).first;
}

HfrOrbital read_hfr(std::istream& is) {
  HfrOrbital orb;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const int col = static_cast<int>(start) + 1;
    std::istringstream ss(line);
    StoTerm t;
    std::string extra;
    if (!(ss >> t.n >> t.zeta >> t.c)) throw ParseError("HFR file: expected 'n zeta c'", lineno, col);
    if (ss >> extra) throw ParseError("HFR file: more than three columns", lineno, col);
    if (t.n < 1) throw ParseError("HFR file: principal number must be >= 1", lineno, col);
    if (!(t.zeta > 0.0)) throw ParseError("HFR file: zeta must be positive", lineno, col);
    orb.terms.push_back(t);
  }
  if (orb.terms.empty()) throw ParseError("HFR file: no terms", lineno, 1);
  return orb;
}

void write_hfr(std::ostream& os, const HfrOrbital& orb) {
  fmt::print(os, "# n zeta c\n");
  for (const auto& t : orb.terms) fmt::print(os, "{} {:.17g} {:.17g}\n", t.n, t.zeta, t.c);
}

}  // namespace cuspbc::cli
