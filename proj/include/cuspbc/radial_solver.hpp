#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cuspbc/cusp.hpp"
#include "cuspbc/radial_function.hpp"

namespace cuspbc {

enum class BoundaryLocation { inner, outer };

/// c_dpsi f' + c_psi f = 0. At the inner boundary f is the reduced function
/// u = R / r^ell and the condition is the r -> 0 limit of its log-derivative;
/// at the outer boundary f is R at r_max.
struct RobinBoundary {
  BoundaryLocation location = BoundaryLocation::inner;
  double c_dpsi = 1.0;
  double c_psi = 0.0;

  void validate() const;
  bool is_dirichlet() const { return c_dpsi == 0.0; }
  /// -c_psi / c_dpsi; only meaningful when not Dirichlet.
  double log_derivative() const { return -c_psi / c_dpsi; }
};

/// Energy-dependent outer condition: the discrete solution follows the
/// asymptotic tail e^{-k r} r^{M(Q+1)/k - 1}, k = sqrt(2 M (W0 - E)), at the
/// last grid point. Without an explicit value, Q + 1 = -q1 q2.
struct AsymptoticBoundary {
  std::optional<double> charge_plus_one;
};

/// Periodic conditions exist only to name the alternative; every solver
/// rejects them.
struct PeriodicBoundary {};

using OuterBoundary = std::variant<RobinBoundary, AsymptoticBoundary>;

/// Effective radial problem
///   -u''/2M - (ell+1)/(M r) u' + (q1q2/r + W0 + V_extra(r) - E) u = 0
/// on a logarithmic grid.
struct RadialProblem {
  int ell = 0;
  double mass = 1.0;
  double pair_product = -1.0;
  double w0 = 0.0;
  std::optional<std::vector<double>> extra_potential;
  std::vector<double> grid;

  /// Throws DomainError unless r_min > 0, the grid has at least 50 points and
  /// is uniform in ln r, mass > 0 and any extra potential covers the grid.
  void validate() const;
  double potential(std::size_t i) const;
};

/// Total mass, charge and energy of the system at large distance.
struct SystemAsymptotics {
  double total_reduced_mass = 1.0;
  double total_charge = 0.0;
  double energy = -0.5;

  void validate() const;
  /// sqrt(-2 M' E)
  double decay() const;
  /// M' (Q + 1) / sqrt(-2 M' E) - 1
  double power() const;
  /// -sqrt(-2 M' E) + power / r
  double kappa(double r) const;
};

/// r_j = r_min e^{j dx}, j = 0..points-1, ending exactly at r_max.
std::vector<double> log_grid(double r_min = 1e-5, double r_max = 40.0, int points = 2000);

/// u' - a u = 0 at the inner boundary.
RobinBoundary robin_inner(int ell, double a);

/// R' - kappa(r_max) R = 0. DomainError if r_max < 20 / sqrt(-2 M' E).
RobinBoundary robin_outer(const SystemAsymptotics& sys, double r_max);

/// v0 e^{-sqrt(-2M'E) r} r^{M'(Q+1)/sqrt(-2M'E) - 1}.
double asymptotic_tail(const SystemAsymptotics& sys, double v0, double r);

struct HydrogenReference {
  double energy = 0.0;
  CuspSeries series;
};

/// E = -Z^2/(2 n^2) and the leading series (1, -Z/(ell+1),
/// (2n^2+ell+1) Z^2 / (2 (ell+1)(2ell+3) n^2)).
HydrogenReference hydrogen_reference(int n, int ell, double Z);

struct Eigenpair {
  double energy = 0.0;
  RadialFunction f;  // R, normalized to int R^2 r^2 dr = 1, positive near 0
};

struct ShootingOptions {
  double energy_tol = 1e-13;
  double mismatch_tol = 1e-10;
  int max_iterations = 400;
};

struct MatrixOptions {
  double energy_tol = 1e-14;
  int max_iterations = 300;
};

/// Outward/inward Numerov integration matched through the discrete
/// Wronskian; bisection then safeguarded secant on E inside e_bracket.
Eigenpair solve_shooting(const RadialProblem& problem, const RobinBoundary& inner,
                         const OuterBoundary& outer, std::pair<double, double> e_bracket,
                         const ShootingOptions& opt = {});

/// Normalized discrete Wronskian mismatch of the shooting method at energy e;
/// changes sign exactly at the discrete eigenvalues.
double shooting_mismatch(const RadialProblem& problem, const RobinBoundary& inner,
                         const OuterBoundary& outer, double e);

/// Brackets of the lowest k levels from a sign scan of shooting_mismatch,
/// geometric in the distance to the continuum threshold (or upward from the
/// bottom of the well when there is none). ConvergenceError if fewer than k
/// sign changes are found.
std::vector<std::pair<double, double>> shooting_brackets(const RadialProblem& problem,
                                                         const RobinBoundary& inner,
                                                         const OuterBoundary& outer, int k);

/// Lowest k eigenpairs of the symmetric tridiagonal Numerov matrix T(E) in
/// x = ln r, located by Sturm counts and bisection.
std::vector<Eigenpair> solve_matrix(const RadialProblem& problem, const RobinBoundary& inner,
                                    const OuterBoundary& outer, int k,
                                    const MatrixOptions& opt = {});

Eigenpair solve_shooting(const RadialProblem&, const RobinBoundary&, const PeriodicBoundary&,
                         std::pair<double, double>, const ShootingOptions& = {});
std::vector<Eigenpair> solve_matrix(const RadialProblem&, const RobinBoundary&,
                                    const PeriodicBoundary&, int, const MatrixOptions& = {});

/// Number of eigenvalues of the discrete problem strictly below e.
int count_eigenvalues_below(const RadialProblem& problem, const RobinBoundary& inner,
                            const OuterBoundary& outer, double e);

/// d ln R / dr at the last grid point from a one-sided five-point stencil in
/// ln r. Requires a logarithmic grid.
double outer_log_derivative(const RadialFunction& f);

/// Two-column whitespace-separated (r, V) table, '#' comments allowed.
struct PotentialTable {
  std::vector<double> r;
  std::vector<double> v;
};
PotentialTable read_potential_table(std::istream& is);
/// Linear interpolation onto grid; DomainError when the grid leaves the table.
std::vector<double> interpolate_potential(const PotentialTable& table,
                                          const std::vector<double>& grid);

}  // namespace cuspbc
