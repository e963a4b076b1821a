#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cuspbc/radial_function.hpp"
#include "cuspbc/radial_solver.hpp"

namespace cuspbc {

enum class BasisKind { slater, gaussian };

const char* to_string(BasisKind k);
BasisKind basis_kind_from_string(const std::string& s);

/// coeff r^(ell + power) e^(-zeta r). Head terms may carry zeta = -a < 0.
struct SlaterTerm {
  double coeff = 1.0;
  int power = 0;
  double zeta = 1.0;
};

/// coeff x^i y^j z^k e^(-g r^2).
struct GaussianTerm {
  double coeff = 1.0;
  int i = 0;
  int j = 0;
  int k = 0;
  double g = 1.0;
  int total_power() const { return i + j + k; }
};

/// coeff r^(ell + power) e^(-g r^2); used by the Gaussian cusp head.
struct RadialGaussianTerm {
  double coeff = 1.0;
  int power = 0;
  double g = 1.0;
};

/// r^ell [1 + (b - a^2/2) r^2] e^(a r).
struct SlaterCuspFunction {
  int ell = 0;
  double a = 0.0;
  double b = 0.0;
  /// a > 0: growing exponential, meant for small r only.
  bool windowed() const { return a > 0.0; }
  double operator()(double r) const;
};

/// r^ell [1 + a r + (b + g0) r^2] e^(-g0 r^2).
struct GaussianCuspFunction {
  int ell = 0;
  double a = 0.0;
  double b = 0.0;
  double g0 = 1.0;
  double operator()(double r) const;
};

SlaterCuspFunction slater_cusp_function(int ell, double a, double b);
/// DomainError if g0 <= 0.
GaussianCuspFunction gaussian_cusp_function(int ell, double a, double b, double g0);

/// Cusp-carrying head plus free tail terms whose radial powers start at
/// ell + 3.
struct CuspBasis {
  BasisKind kind = BasisKind::slater;
  int ell = 0;
  double a = 0.0;
  double b = 0.0;
  double g0 = 0.0;                            // Gaussian head exponent
  std::vector<SlaterTerm> slater_head;        // kind == slater
  std::vector<RadialGaussianTerm> gaussian_head;  // kind == gaussian
  std::vector<SlaterTerm> slater_tail;
  std::vector<GaussianTerm> gaussian_tail;
  /// Unit vector along which Cartesian tails are contracted onto r.
  std::array<double, 3> direction{0.5773502691896258, 0.5773502691896258, 0.5773502691896258};
  /// Largest r at which a windowed (growing) head may be evaluated.
  std::optional<double> cutoff;

  bool windowed() const { return kind == BasisKind::slater && a > 0.0; }
  /// Radial value along `direction`. DomainError beyond the cutoff of a
  /// windowed basis.
  double evaluate(double r) const;
  RadialFunction sample(const std::vector<double>& grid) const;
};

struct BasisOptions {
  double g0 = 1.0;                     // Gaussian head exponent
  std::vector<double> tail_coeffs;     // default 1 for every tail term
  std::optional<double> cutoff;        // windowed heads: default (ell+1)/a
};

/// Head plus tail terms lambda = 3..L, one exponent per lambda
/// (tail_exponents.size() == L - 2, or a single exponent used for all).
/// Slater tails are r^(ell+lambda) e^(-zeta r); Gaussian tails are
/// x^(ell+lambda) e^(-g r^2).
CuspBasis build_basis(BasisKind kind, int ell, double a, double b,
                      const std::vector<double>& tail_exponents, int L,
                      const BasisOptions& opt = {});

/// Append a tail term; DomainError below the ell + 3 power floor or for a
/// non-positive exponent.
void add_tail(CuspBasis& basis, const SlaterTerm& term);
void add_tail(CuspBasis& basis, const GaussianTerm& term);

struct CuspOrders {
  double a_est = 0.0;
  double b_est = 0.0;
};

/// Exact rational series arithmetic on the closed form.
CuspOrders verify_cusp_orders(const CuspBasis& basis);
CuspOrders verify_cusp_orders(const SlaterCuspFunction& f);
CuspOrders verify_cusp_orders(const GaussianCuspFunction& f);
/// Bare Gaussian r^ell e^(-g r^2).
CuspOrders verify_bare_gaussian(int ell, double g);
/// Sampled data through the origin fit of cusp_limit_first/second.
CuspOrders verify_cusp_orders(const RadialFunction& f, int ell);

/// e^(-sqrt(-2M'E) r) r^(M'(Q+1)/sqrt(-2M'E) - 1).
struct AsymptoticSlater {
  double decay = 1.0;
  double power = 0.0;
  double operator()(double r) const;
  /// d ln f / dr.
  double log_derivative(double r) const { return -decay + power / r; }
};

/// DomainError if sys.energy >= 0.
AsymptoticSlater asymptotic_slater(const SystemAsymptotics& sys);

/// Interchange text format: header comments with kind, ell, a, b (and g0),
/// then one term per line: `S coeff power zeta` (Slater, head and tail),
/// `R coeff power g` (Gaussian head), `G coeff i j k g` (Cartesian tail).
void write_basis(std::ostream& os, const CuspBasis& basis);
CuspBasis read_basis(std::istream& is);

}  // namespace cuspbc
