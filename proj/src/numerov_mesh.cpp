#include "numerov_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cuspbc/errors.hpp"
#include "cuspbc/numeric.hpp"

namespace cuspbc::detail {

namespace {

// Largest admissible r |V_total + (Q+1)/r| at r_max for an asymptotic outer
// boundary.
constexpr double kResidualChargeTol = 1e-3;

// Regular series u = sum a_k r^k with a_0 = 1, a_1 = a, continued by the
// constant-background recurrence.
double regular_u(int ell, double a, double beta_sq, double r) {
  const double alpha = (ell + 1) * a;
  double prev = 1.0;
  double cur = a;
  double sum = 1.0 + a * r;
  double rk = r;
  int small = 0;
  for (int k = 1; k < 500; ++k) {
    const double next = (2.0 * alpha * cur + beta_sq * prev) / ((2.0 * ell + 2.0 + k) * (k + 1.0));
    rk *= r;
    const double term = next * rk;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small == 2) break;
    } else {
      small = 0;
    }
    prev = cur;
    cur = next;
  }
  return sum;
}

}  // namespace

NumerovMesh::NumerovMesh(const RadialProblem& problem, const RobinBoundary& inner,
                         const OuterBoundary& outer)
    : ell_(problem.ell),
      mass_(problem.mass),
      qq_(problem.pair_product),
      w0_(problem.w0),
      r_(problem.grid) {
  problem.validate();
  inner.validate();
  if (inner.location != BoundaryLocation::inner) {
    throw DomainError("solver: inner boundary condition has location 'outer'");
  }
  n_ = static_cast<int>(r_.size());
  dx_ = std::log(r_.back() / r_.front()) / (n_ - 1);
  const double lam = ell_ + 0.5;
  const double ch = std::cosh(lam * dx_);
  g0_ = 12.0 * (ch - 1.0) / ((5.0 + ch) * dx_ * dx_);

  v_.resize(n_);
  for (int i = 0; i < n_; ++i) v_[i] = problem.potential(i);
  const auto& vx = problem.extra_potential;
  vx_origin_ = vx ? vx->front() : 0.0;
  const double vx_end = vx ? vx->back() : 0.0;
  const double r_lo = r_.front() * std::exp(-dx_);
  const double r_hi = r_.back() * std::exp(dx_);
  v_lo_ghost_ = qq_ / r_lo + w0_ + vx_origin_;
  v_hi_ghost_ = qq_ / r_hi + w0_ + vx_end;

  inner_dirichlet_ = inner.is_dirichlet();
  inner_a_ = inner_dirichlet_ ? 0.0 : inner.log_derivative();

  if (const auto* rb = std::get_if<RobinBoundary>(&outer)) {
    rb->validate();
    if (rb->location != BoundaryLocation::outer) {
      throw DomainError("solver: outer boundary condition has location 'inner'");
    }
    if (rb->is_dirichlet()) {
      outer_kind_ = Outer::dirichlet;
    } else {
      outer_kind_ = Outer::robin;
      outer_kappa_ = rb->log_derivative();
    }
  } else {
    const auto& ab = std::get<AsymptoticBoundary>(outer);
    outer_kind_ = Outer::asymptotic;
    q_plus_one_ = ab.charge_plus_one.value_or(-qq_);
    const double rmax = r_.back();
    const double resid = rmax * (qq_ / rmax + vx_end) + q_plus_one_;
    if (std::abs(resid) > kResidualChargeTol * std::max(1.0, std::abs(q_plus_one_))) {
      throw DomainError(fmt::format(
          "solver: potential at r_max does not approach W0 - (Q+1)/r with Q+1 = {} "
          "(r (V - W0) + Q + 1 = {:.3g}); the extra potential must decay faster than 1/r",
          q_plus_one_, resid));
    }
  }
  // Per-node factors including both ghost nodes (index shifted by one).
  dx2_12_ = dx_ * dx_ / 12.0;
  r2m_.resize(n_ + 2);
  vg_.resize(n_ + 2);
  for (int i = -1; i <= n_; ++i) {
    const double r = i < 0 ? r_lo : i >= n_ ? r_hi : r_[i];
    r2m_[i + 1] = 2.0 * mass_ * r * r;
    vg_[i + 1] = potential_at(i);
  }
  first_ = inner_dirichlet_ ? 1 : 0;
  last_ = outer_kind_ == Outer::dirichlet ? n_ - 2 : n_ - 1;
}

double NumerovMesh::potential_at(int i) const {
  if (i < 0) return v_lo_ghost_;
  if (i >= n_) return v_hi_ghost_;
  return v_[i];
}

double NumerovMesh::t(int i, double e) const {
  const std::size_t j = static_cast<std::size_t>(i + 1);
  return dx2_12_ * (g0_ + r2m_[j] * (vg_[j] - e));
}

double NumerovMesh::s(int i, double e) const {
  const double ti = t(i, e);
  return (1.0 + 5.0 * ti) / (1.0 - ti);
}

double NumerovMesh::effective_potential(int i) const {
  return v_[i] + g0_ / (2.0 * mass_ * r_[i] * r_[i]);
}

double NumerovMesh::inner_chi_ratio(double e) const {
  const double r0 = r_.front();
  const double rm = r0 * std::exp(-dx_);
  const double beta_sq = 2.0 * mass_ * (w0_ + vx_origin_ - e);
  const double ratio = regular_u(ell_, inner_a_, beta_sq, rm) /
                       regular_u(ell_, inner_a_, beta_sq, r0);
  return std::exp(-(ell_ + 0.5) * dx_) * ratio;
}

double NumerovMesh::outer_chi_ratio(double e) const {
  const double rn = r_.back();
  const double rg = rn * std::exp(dx_);
  if (outer_kind_ == Outer::robin) {
    return std::exp(outer_kappa_ * (rg - rn) + 0.5 * dx_);
  }
  const double k = std::sqrt(2.0 * mass_ * std::max(w0_ - e, 0.0));
  if (k == 0.0) return std::numeric_limits<double>::infinity();
  const double p = mass_ * q_plus_one_ / k - 1.0;
  return std::exp(-k * (rg - rn) + (p + 0.5) * dx_);
}

double NumerovMesh::inner_ghost_phi_ratio(double e) const {
  if (inner_dirichlet_) return 0.0;
  return w(-1, e) * inner_chi_ratio(e) / w(0, e);
}

double NumerovMesh::outer_ghost_phi_ratio(double e) const {
  if (outer_kind_ == Outer::dirichlet) return 0.0;
  return w(n_, e) * outer_chi_ratio(e) / w(n_ - 1, e);
}

void NumerovMesh::diagonal(double e, std::vector<double>& d) const {
  d.resize(last_ - first_ + 1);
  for (int i = first_; i <= last_; ++i) d[i - first_] = -2.0 * s(i, e);
  d.front() += inner_ghost_phi_ratio(e);
  d.back() += outer_ghost_phi_ratio(e);
}

double NumerovMesh::lowest_regular_energy() const {
  // t < 1 at every node including ghosts.
  double e = -std::numeric_limits<double>::infinity();
  const double tmax = 12.0 / (dx_ * dx_);
  for (int i = -1; i <= n_; ++i) {
    const double r = i < 0 ? r_.front() * std::exp(-dx_)
                     : i >= n_ ? r_.back() * std::exp(dx_)
                               : r_[i];
    e = std::max(e, potential_at(i) + (g0_ - tmax) / (2.0 * mass_ * r * r));
  }
  return e;
}

double NumerovMesh::threshold() const {
  if (outer_kind_ == Outer::asymptotic) return w0_;
  return std::numeric_limits<double>::infinity();
}

int NumerovMesh::count_below(double e, double* last_pivot) const {
  // Sturm sequence of -T(E): its negative eigenvalues correspond to levels
  // below e.
  int count = 0;
  double p = 0.0;
  for (int i = first_; i <= last_; ++i) {
    double di = -2.0 * s(i, e);
    if (i == first_) di += inner_ghost_phi_ratio(e);
    if (i == last_) di += outer_ghost_phi_ratio(e);
    p = i == first_ ? -di : -di - 1.0 / p;
    if (p == 0.0) p = -std::numeric_limits<double>::min();
    if (std::isnan(p)) {
      throw StiffnessError("Sturm count undefined; grid too coarse for this energy");
    }
    if (p < 0.0) ++count;
  }
  if (last_pivot) *last_pivot = p;
  return count;
}

RadialFunction NumerovMesh::to_radial(const std::vector<double>& phi, double e) const {
  RadialFunction f;
  f.ell = ell_;
  f.meaning = RadialMeaning::R;
  f.grid = r_;
  f.values.assign(n_, 0.0);
  for (int i = first_; i <= last_; ++i) {
    f.values[i] = phi[i - first_] / w(i, e) / std::sqrt(r_[i]);
  }
  // int R^2 r^2 dr = int R^2 r^3 dx.
  std::vector<double> dens(n_);
  for (int i = 0; i < n_; ++i) dens[i] = f.values[i] * f.values[i] * r_[i] * r_[i] * r_[i];
  const double norm = std::sqrt(simpson_uniform(dens, dx_));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericalError("eigenfunction could not be normalized");
  }
  double sign = 1.0;
  for (int i = first_; i <= last_; ++i) {
    if (f.values[i] != 0.0) {
      sign = f.values[i] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& v : f.values) v *= sign / norm;
  return f;
}

}  // namespace cuspbc::detail
