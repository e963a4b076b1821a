#include "cuspbc/basis.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cuspbc/cusp_limits.hpp"
#include "cuspbc/errors.hpp"
#include "cuspbc/taylor_series.hpp"

namespace cuspbc {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using Series = TaylorSeries<Rational>;

constexpr int kTailFloor = 3;

Rational exact(double x) { return Rational(x); }

CuspOrders orders_from(const Series& s) {
  if (s[0] == 0) throw FitError("cusp orders: leading coefficient vanishes");
  const Rational a = s[1] / s[0];
  const Rational b = s[2] / s[0];
  return {static_cast<double>(a), static_cast<double>(b)};
}

// Series of (radial part)/r^ell through order 2.
Series slater_series(const SlaterTerm& t) {
  return Series::monomial(exact(t.coeff), t.power, 2) * Series::exp_linear(-exact(t.zeta), 2);
}

Series radial_gaussian_series(const RadialGaussianTerm& t) {
  return Series::monomial(exact(t.coeff), t.power, 2) * Series::exp_quadratic(exact(t.g), 2);
}

void check_ell(int ell) {
  if (ell < 0) throw DomainError("basis: ell must be non-negative");
}

}  // namespace

const char* to_string(BasisKind k) { return k == BasisKind::slater ? "slater" : "gaussian"; }

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "slater") return BasisKind::slater;
  if (s == "gaussian") return BasisKind::gaussian;
  throw DomainError("basis kind must be 'slater' or 'gaussian', got '" + s + "'");
}

double SlaterCuspFunction::operator()(double r) const {
  return std::pow(r, ell) * (1.0 + (b - 0.5 * a * a) * r * r) * std::exp(a * r);
}

double GaussianCuspFunction::operator()(double r) const {
  return std::pow(r, ell) * (1.0 + a * r + (b + g0) * r * r) * std::exp(-g0 * r * r);
}

SlaterCuspFunction slater_cusp_function(int ell, double a, double b) {
  check_ell(ell);
  return {ell, a, b};
}

GaussianCuspFunction gaussian_cusp_function(int ell, double a, double b, double g0) {
  check_ell(ell);
  if (!(g0 > 0.0)) throw DomainError("gaussian_cusp_function: g0 must be positive");
  return {ell, a, b, g0};
}

double CuspBasis::evaluate(double r) const {
  if (r < 0.0) throw DomainError("basis: r must be non-negative");
  if (windowed()) {
    const double rc = cutoff.value_or(kUnbounded);
    if (r > rc) {
      throw DomainError(fmt::format(
          "basis: windowed (growing) cusp head evaluated at r = {} beyond cutoff {}", r, rc));
    }
  }
  const double rl = std::pow(r, ell);
  double sum = 0.0;
  for (const auto& t : slater_head) sum += t.coeff * rl * std::pow(r, t.power) * std::exp(-t.zeta * r);
  for (const auto& t : gaussian_head) {
    sum += t.coeff * rl * std::pow(r, t.power) * std::exp(-t.g * r * r);
  }
  for (const auto& t : slater_tail) sum += t.coeff * rl * std::pow(r, t.power) * std::exp(-t.zeta * r);
  for (const auto& t : gaussian_tail) {
    const double ang = std::pow(direction[0], t.i) * std::pow(direction[1], t.j) *
                       std::pow(direction[2], t.k);
    sum += t.coeff * ang * std::pow(r, t.total_power()) * std::exp(-t.g * r * r);
  }
  return sum;
}

RadialFunction CuspBasis::sample(const std::vector<double>& grid) const {
  RadialFunction f;
  f.ell = ell;
  f.meaning = RadialMeaning::R;
  f.grid = grid;
  f.values.reserve(grid.size());
  for (double r : grid) f.values.push_back(evaluate(r));
  f.validate();
  return f;
}

void add_tail(CuspBasis& basis, const SlaterTerm& term) {
  if (basis.kind != BasisKind::slater) throw DomainError("basis: Slater tail on a Gaussian basis");
  if (term.power < kTailFloor) {
    throw DomainError(fmt::format(
        "basis: Slater tail power ell+{} is below the ell+3 floor", term.power));
  }
  if (!(term.zeta > 0.0)) throw DomainError("basis: tail exponents must be positive");
  basis.slater_tail.push_back(term);
}

void add_tail(CuspBasis& basis, const GaussianTerm& term) {
  if (basis.kind != BasisKind::gaussian) throw DomainError("basis: Gaussian tail on a Slater basis");
  if (term.i < 0 || term.j < 0 || term.k < 0) {
    throw DomainError("basis: Cartesian powers must be non-negative");
  }
  if (term.total_power() < basis.ell + kTailFloor) {
    throw DomainError(fmt::format(
        "basis: Gaussian tail power {} is below the ell+3 floor ({})", term.total_power(),
        basis.ell + kTailFloor));
  }
  if (!(term.g > 0.0)) throw DomainError("basis: tail exponents must be positive");
  basis.gaussian_tail.push_back(term);
}

CuspBasis build_basis(BasisKind kind, int ell, double a, double b,
                      const std::vector<double>& tail_exponents, int L,
                      const BasisOptions& opt) {
  check_ell(ell);
  if (L < kTailFloor - 1) throw DomainError("build_basis: L must be at least 3 (or 2 for no tail)");
  const int ntail = L - kTailFloor + 1;
  if (ntail > 0 && tail_exponents.size() != 1 &&
      tail_exponents.size() != static_cast<std::size_t>(ntail)) {
    throw DomainError(fmt::format(
        "build_basis: expected {} tail exponents (or one shared), got {}", ntail,
        tail_exponents.size()));
  }
  if (!opt.tail_coeffs.empty() && opt.tail_coeffs.size() != static_cast<std::size_t>(std::max(ntail, 0))) {
    throw DomainError("build_basis: tail coefficient count does not match the tail");
  }
  for (double z : tail_exponents) {
    if (!(z > 0.0)) throw DomainError("build_basis: tail exponents must be positive");
  }
  CuspBasis basis;
  basis.kind = kind;
  basis.ell = ell;
  basis.a = a;
  basis.b = b;
  if (kind == BasisKind::slater) {
    basis.slater_head = {{1.0, 0, -a}, {b - 0.5 * a * a, 2, -a}};
    if (a > 0.0) basis.cutoff = opt.cutoff.value_or((ell + 1) / a);
  } else {
    if (!(opt.g0 > 0.0)) throw DomainError("build_basis: g0 must be positive");
    basis.g0 = opt.g0;
    basis.gaussian_head = {{1.0, 0, opt.g0}, {a, 1, opt.g0}, {b + opt.g0, 2, opt.g0}};
  }
  for (int i = 0; i < ntail; ++i) {
    const int lambda = kTailFloor + i;
    const double z = tail_exponents.size() == 1 ? tail_exponents[0] : tail_exponents[i];
    const double c = opt.tail_coeffs.empty() ? 1.0 : opt.tail_coeffs[i];
    if (kind == BasisKind::slater) {
      add_tail(basis, SlaterTerm{c, lambda, z});
    } else {
      add_tail(basis, GaussianTerm{c, ell + lambda, 0, 0, z});
    }
  }
  return basis;
}

CuspOrders verify_cusp_orders(const CuspBasis& basis) {
  Series s(2);
  for (const auto& t : basis.slater_head) s += slater_series(t);
  for (const auto& t : basis.gaussian_head) s += radial_gaussian_series(t);
  for (const auto& t : basis.slater_tail) s += slater_series(t);
  for (const auto& t : basis.gaussian_tail) {
    // Contracted along the direction: powers below ell+3 never occur, so the
    // term starts at order >= 3 of the series divided by r^ell.
    const int p = t.total_power() - basis.ell;
    if (p < 0) throw DomainError("basis: Gaussian tail power below ell");
    const double ang = std::pow(basis.direction[0], t.i) * std::pow(basis.direction[1], t.j) *
                       std::pow(basis.direction[2], t.k);
    s += Series::monomial(exact(t.coeff * ang), p, 2) * Series::exp_quadratic(exact(t.g), 2);
  }
  return orders_from(s);
}

CuspOrders verify_cusp_orders(const SlaterCuspFunction& f) {
  const Rational a = exact(f.a);
  const Rational c2 = exact(f.b) - a * a / 2;
  Series head = Series::monomial(Rational(1), 0, 2);
  head += Series::monomial(c2, 2, 2);
  return orders_from(head * Series::exp_linear(a, 2));
}

CuspOrders verify_cusp_orders(const GaussianCuspFunction& f) {
  Series head = Series::monomial(Rational(1), 0, 2);
  head += Series::monomial(exact(f.a), 1, 2);
  head += Series::monomial(exact(f.b) + exact(f.g0), 2, 2);
  return orders_from(head * Series::exp_quadratic(exact(f.g0), 2));
}

CuspOrders verify_bare_gaussian(int ell, double g) {
  check_ell(ell);
  if (!(g > 0.0)) throw DomainError("bare Gaussian: exponent must be positive");
  return orders_from(Series::exp_quadratic(exact(g), 2));
}

CuspOrders verify_cusp_orders(const RadialFunction& f, int ell) {
  const CuspFit fit = fit_origin(f, ell);
  return {fit.c[1] / fit.c[0], fit.c[2] / fit.c[0]};
}

double AsymptoticSlater::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("asymptotic Slater function: r must be positive");
  return std::exp(-decay * r) * std::pow(r, power);
}

AsymptoticSlater asymptotic_slater(const SystemAsymptotics& sys) {
  if (!(sys.energy < 0.0)) throw DomainError("asymptotic_slater: energy must be negative");
  return {sys.decay(), sys.power()};
}

void write_basis(std::ostream& os, const CuspBasis& basis) {
  fmt::print(os, "# cuspbc basis\n");
  fmt::print(os, "# kind={}\n", to_string(basis.kind));
  fmt::print(os, "# ell={}\n", basis.ell);
  fmt::print(os, "# a={:.17g}\n", basis.a);
  fmt::print(os, "# b={:.17g}\n", basis.b);
  if (basis.kind == BasisKind::gaussian) {
    fmt::print(os, "# g0={:.17g}\n", basis.g0);
    fmt::print(os, "# direction={:.17g} {:.17g} {:.17g}\n", basis.direction[0],
               basis.direction[1], basis.direction[2]);
  }
  if (basis.cutoff) fmt::print(os, "# cutoff={:.17g}\n", *basis.cutoff);
  for (const auto& t : basis.slater_head) {
    fmt::print(os, "S {:.17g} {} {:.17g}\n", t.coeff, t.power, t.zeta);
  }
  for (const auto& t : basis.gaussian_head) {
    fmt::print(os, "R {:.17g} {} {:.17g}\n", t.coeff, t.power, t.g);
  }
  for (const auto& t : basis.slater_tail) {
    fmt::print(os, "S {:.17g} {} {:.17g}\n", t.coeff, t.power, t.zeta);
  }
  for (const auto& t : basis.gaussian_tail) {
    fmt::print(os, "G {:.17g} {} {} {} {:.17g}\n", t.coeff, t.i, t.j, t.k, t.g);
  }
}

CuspBasis read_basis(std::istream& is) {
  CuspBasis basis;
  bool have_kind = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    const int col = static_cast<int>(start) + 1;
    if (line[start] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const auto kb = line.find_first_not_of(" \t#", start);
      const std::string key = line.substr(kb, eq - kb);
      const std::string val = line.substr(eq + 1);
      try {
        if (key == "kind") {
          std::istringstream vs(val);
          std::string k;
          vs >> k;
          basis.kind = basis_kind_from_string(k);
          have_kind = true;
        } else if (key == "ell") {
          basis.ell = std::stoi(val);
        } else if (key == "a") {
          basis.a = std::stod(val);
        } else if (key == "b") {
          basis.b = std::stod(val);
        } else if (key == "g0") {
          basis.g0 = std::stod(val);
        } else if (key == "cutoff") {
          basis.cutoff = std::stod(val);
        } else if (key == "direction") {
          std::istringstream vs(val);
          if (!(vs >> basis.direction[0] >> basis.direction[1] >> basis.direction[2])) {
            throw ParseError("basis: direction needs three numbers", lineno, static_cast<int>(eq) + 2);
          }
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw ParseError("basis: bad header value for '" + key + "'", lineno, static_cast<int>(eq) + 2);
      }
      continue;
    }
    if (!have_kind) throw ParseError("basis: term before '# kind=' header", lineno, col);
    std::istringstream ss(line.substr(start));
    std::string tag;
    ss >> tag;
    bool ok = true;
    std::string extra;
    if (tag == "S") {
      SlaterTerm t;
      ok = static_cast<bool>(ss >> t.coeff >> t.power >> t.zeta) && !(ss >> extra);
      if (!ok) throw ParseError("basis: expected 'S coeff power zeta'", lineno, col);
      if (basis.kind != BasisKind::slater) throw ParseError("basis: S term in a Gaussian basis", lineno, col);
      if (t.power < kTailFloor) {
        basis.slater_head.push_back(t);
      } else {
        try {
          add_tail(basis, t);
        } catch (const DomainError& e) {
          throw ParseError(e.what(), lineno, col);
        }
      }
    } else if (tag == "R") {
      RadialGaussianTerm t;
      ok = static_cast<bool>(ss >> t.coeff >> t.power >> t.g) && !(ss >> extra);
      if (!ok) throw ParseError("basis: expected 'R coeff power g'", lineno, col);
      if (basis.kind != BasisKind::gaussian) throw ParseError("basis: R term in a Slater basis", lineno, col);
      basis.gaussian_head.push_back(t);
    } else if (tag == "G") {
      GaussianTerm t;
      ok = static_cast<bool>(ss >> t.coeff >> t.i >> t.j >> t.k >> t.g) && !(ss >> extra);
      if (!ok) throw ParseError("basis: expected 'G coeff i j k g'", lineno, col);
      try {
        add_tail(basis, t);
      } catch (const DomainError& e) {
        throw ParseError(e.what(), lineno, col);
      }
    } else {
      throw ParseError("basis: unknown term tag '" + tag + "'", lineno, col);
    }
  }
  if (!have_kind) throw ParseError("basis: missing '# kind=' header", lineno, 1);
  return basis;
}

}  // namespace cuspbc
