#pragma once

// Shared Numerov discretization of the radial problem in x = ln r.
//
// With chi = r^{1/2} R the radial equation becomes chi'' = g(x) chi,
// g = G0 + 2 M r^2 (V - E). Numerov's rule, rewritten for phi = w chi with
// w = 1 - dx^2 g / 12, is the symmetric three-term relation
//   phi_{i-1} - 2 s_i phi_i + phi_{i+1} = 0,  s = (1 + 5t)/(1 - t), t = dx^2 g/12.
// G0 replaces (ell + 1/2)^2 by the value for which the stencil reproduces
// r^{ell+1/2} exactly.

#include <vector>

#include "cuspbc/radial_solver.hpp"

namespace cuspbc::detail {

class NumerovMesh {
 public:
  NumerovMesh(const RadialProblem& problem, const RobinBoundary& inner,
              const OuterBoundary& outer);

  int size() const { return n_; }
  int first() const { return first_; }
  int last() const { return last_; }
  double dx() const { return dx_; }
  const std::vector<double>& r() const { return r_; }

  /// t = dx^2 g / 12 at node i; i = -1 and i = n are the ghost nodes.
  double t(int i, double e) const;
  double s(int i, double e) const;
  double w(int i, double e) const { return 1.0 - t(i, e); }

  /// Diagonal of T(E) over the active nodes first..last, boundary rows
  /// included. Off-diagonals are all 1.
  void diagonal(double e, std::vector<double>& d) const;

  /// phi(ghost)/phi(adjacent node); 0 for a Dirichlet side.
  double inner_ghost_phi_ratio(double e) const;
  double outer_ghost_phi_ratio(double e) const;

  /// Effective potential V + G0/(2 M r^2) at node i.
  double effective_potential(int i) const;

  /// Energy range on which every Numerov weight is regular (t < 1).
  double lowest_regular_energy() const;
  /// Upper energy limit of the search (continuum threshold for an
  /// asymptotic outer boundary), or +inf.
  double threshold() const;

  /// Sturm count: eigenvalues of the discrete problem below e.
  /// last_pivot (optional) receives det T_n / det T_{n-1} of -T(E), which
  /// passes through zero at each discrete level.
  int count_below(double e, double* last_pivot = nullptr) const;

  /// R on the full grid from phi on the active nodes (zero on dropped nodes),
  /// normalized and made positive near the origin.
  RadialFunction to_radial(const std::vector<double>& phi, double e) const;

  int ell() const { return ell_; }

 private:
  double potential_at(int i) const;
  double inner_chi_ratio(double e) const;
  double outer_chi_ratio(double e) const;

  int ell_;
  double mass_;
  double qq_;
  double w0_;
  int n_;
  int first_;
  int last_;
  double dx_;
  double g0_;
  std::vector<double> r_;
  std::vector<double> v_;  // potential on nodes
  double v_lo_ghost_;
  double v_hi_ghost_;
  double vx_origin_;
  double dx2_12_;
  std::vector<double> r2m_;  // 2 M r^2 on ghost + grid + ghost
  std::vector<double> vg_;   // potential on ghost + grid + ghost

  bool inner_dirichlet_;
  double inner_a_;
  enum class Outer { robin, dirichlet, asymptotic } outer_kind_;
  double outer_kappa_ = 0.0;
  double q_plus_one_ = 0.0;
};

}  // namespace cuspbc::detail
