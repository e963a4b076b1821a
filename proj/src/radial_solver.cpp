#include "cuspbc/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "cuspbc/errors.hpp"
#include "numerov_mesh.hpp"

namespace cuspbc {

void RobinBoundary::validate() const {
  if (c_dpsi == 0.0 && c_psi == 0.0) {
    throw DomainError("Robin boundary: coefficients must not both vanish");
  }
  if (!std::isfinite(c_dpsi) || !std::isfinite(c_psi)) {
    throw DomainError("Robin boundary: non-finite coefficient");
  }
}

void RadialProblem::validate() const {
  if (ell < 0) throw DomainError("radial problem: ell must be non-negative");
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("radial problem: mass must be positive and finite");
  }
  if (!std::isfinite(pair_product) || !std::isfinite(w0)) {
    throw DomainError("radial problem: non-finite potential parameters");
  }
  if (grid.size() < 50) throw DomainError("radial problem: grid needs at least 50 points");
  if (!(grid.front() > 0.0)) throw DomainError("radial problem: r_min must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError("radial problem: grid must be strictly increasing");
    }
  }
  const double dx = std::log(grid.back() / grid.front()) / (grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double step = std::log(grid[i] / grid[i - 1]);
    if (std::abs(step - dx) > 1e-9 * dx) {
      throw DomainError("radial problem: grid must be uniform in ln r");
    }
  }
  if (extra_potential) {
    if (extra_potential->size() != grid.size()) {
      throw DomainError("radial problem: extra potential must be given on the full grid");
    }
    for (double v : *extra_potential) {
      if (!std::isfinite(v)) throw DomainError("radial problem: non-finite extra potential");
    }
  }
}

double RadialProblem::potential(std::size_t i) const {
  double v = pair_product / grid[i] + w0;
  if (extra_potential) v += (*extra_potential)[i];
  return v;
}

void SystemAsymptotics::validate() const {
  if (!(energy < 0.0)) throw DomainError("asymptotics: energy must be negative");
  if (!(total_reduced_mass > 0.0)) {
    throw DomainError("asymptotics: total reduced mass must be positive");
  }
}

double SystemAsymptotics::decay() const {
  validate();
  return std::sqrt(-2.0 * total_reduced_mass * energy);
}

double SystemAsymptotics::power() const {
  return total_reduced_mass * (total_charge + 1.0) / decay() - 1.0;
}

double SystemAsymptotics::kappa(double r) const { return -decay() + power() / r; }

std::vector<double> log_grid(double r_min, double r_max, int points) {
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 2) {
    throw DomainError("log_grid: need 0 < r_min < r_max and at least 2 points");
  }
  std::vector<double> r(points);
  const double dx = std::log(r_max / r_min) / (points - 1);
  for (int i = 0; i < points; ++i) r[i] = r_min * std::exp(i * dx);
  r.back() = r_max;
  return r;
}

RobinBoundary robin_inner(int ell, double a) {
  if (ell < 0) throw DomainError("robin_inner: ell must be non-negative");
  return {BoundaryLocation::inner, 1.0, -a};
}

RobinBoundary robin_outer(const SystemAsymptotics& sys, double r_max) {
  const double k = sys.decay();
  if (!(r_max >= 20.0 / k)) {
    throw DomainError(fmt::format(
        "robin_outer: r_max = {} is below 20/sqrt(-2M'E) = {}", r_max, 20.0 / k));
  }
  return {BoundaryLocation::outer, 1.0, -sys.kappa(r_max)};
}

double asymptotic_tail(const SystemAsymptotics& sys, double v0, double r) {
  if (!(r > 0.0)) throw DomainError("asymptotic_tail: r must be positive");
  return v0 * std::exp(-sys.decay() * r) * std::pow(r, sys.power());
}

HydrogenReference hydrogen_reference(int n, int ell, double Z) {
  if (ell < 0 || n < ell + 1) throw DomainError("hydrogen_reference: need 0 <= ell < n");
  if (!(Z > 0.0)) throw DomainError("hydrogen_reference: Z must be positive");
  HydrogenReference ref;
  const double n2 = static_cast<double>(n) * n;
  ref.energy = -Z * Z / (2.0 * n2);
  ref.series.ell = ell;
  ref.series.alpha = -Z;
  ref.series.beta_sq = Z * Z / n2;
  ref.series.coeffs = {1.0, -Z / (ell + 1),
                       (2.0 * n2 + ell + 1) * Z * Z / (2.0 * (ell + 1) * (2 * ell + 3) * n2)};
  return ref;
}

int count_eigenvalues_below(const RadialProblem& problem, const RobinBoundary& inner,
                            const OuterBoundary& outer, double e) {
  const detail::NumerovMesh mesh(problem, inner, outer);
  if (!(e > mesh.lowest_regular_energy())) {
    throw StiffnessError("energy below the range resolvable on this grid");
  }
  return mesh.count_below(e);
}

namespace {

// Eigenvector of the (numerically singular) tridiagonal T with unit
// off-diagonals by twisted factorization.
std::vector<double> twisted_eigenvector(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  constexpr double tiny = std::numeric_limits<double>::min();
  std::vector<double> dp(n), dm(n);
  dp[0] = d[0];
  for (int i = 1; i < n; ++i) {
    dp[i] = d[i] - 1.0 / (dp[i - 1] == 0.0 ? tiny : dp[i - 1]);
  }
  dm[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    dm[i] = d[i] - 1.0 / (dm[i + 1] == 0.0 ? tiny : dm[i + 1]);
  }
  int k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double gamma = dp[i] + dm[i] - d[i];
    if (std::abs(gamma) < best) {
      best = std::abs(gamma);
      k = i;
    }
  }
  std::vector<double> z(n, 0.0);
  z[k] = 1.0;
  for (int i = k - 1; i >= 0; --i) z[i] = -z[i + 1] / (dp[i] == 0.0 ? tiny : dp[i]);
  for (int i = k + 1; i < n; ++i) z[i] = -z[i - 1] / (dm[i] == 0.0 ? tiny : dm[i]);
  return z;
}

// gamma_k = dp_k + dm_k - d_k of the twisted factorization at fixed k;
// 1 / gamma_k is the (k, k) entry of the inverse, so gamma_k passes through
// zero at an eigenvalue whose eigenvector is large at k.
double twisted_gamma(const std::vector<double>& d, int k) {
  const int n = static_cast<int>(d.size());
  constexpr double tiny = std::numeric_limits<double>::min();
  double dp = d[0];
  for (int i = 1; i <= k; ++i) dp = d[i] - 1.0 / (dp == 0.0 ? tiny : dp);
  double dm = d[n - 1];
  for (int i = n - 2; i >= k; --i) dm = d[i] - 1.0 / (dm == 0.0 ? tiny : dm);
  return dp + dm - d[k];
}

// Sturm count of -T from its diagonal (unit off-diagonals).
int count_from_diagonal(const std::vector<double>& d) {
  int count = 0;
  double p = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    p = i == 0 ? -d[0] : -d[i] - 1.0 / p;
    if (p == 0.0) p = -std::numeric_limits<double>::min();
    if (std::isnan(p)) throw StiffnessError("Sturm count undefined; grid too coarse for this energy");
    if (p < 0.0) ++count;
  }
  return count;
}

int best_twist(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  constexpr double tiny = std::numeric_limits<double>::min();
  std::vector<double> dp(n), dm(n);
  dp[0] = d[0];
  for (int i = 1; i < n; ++i) dp[i] = d[i] - 1.0 / (dp[i - 1] == 0.0 ? tiny : dp[i - 1]);
  dm[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) dm[i] = d[i] - 1.0 / (dm[i + 1] == 0.0 ? tiny : dm[i + 1]);
  int k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double gamma = std::abs(dp[i] + dm[i] - d[i]);
    if (gamma < best) {
      best = gamma;
      k = i;
    }
  }
  return k;
}

}  // namespace

std::vector<Eigenpair> solve_matrix(const RadialProblem& problem, const RobinBoundary& inner,
                                    const OuterBoundary& outer, int k,
                                    const MatrixOptions& opt) {
  if (k < 1) throw DomainError("solve_matrix: k must be at least 1");
  const detail::NumerovMesh mesh(problem, inner, outer);
  const double e_floor = mesh.lowest_regular_energy();

  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.size(); ++i) vmin = std::min(vmin, mesh.effective_potential(i));
  double lo = vmin - 1e-3 * std::max(1.0, std::abs(vmin));
  if (lo <= e_floor) lo = e_floor + 1e-9 * std::max(1.0, std::abs(e_floor));
  if (mesh.count_below(lo) != 0) {
    throw StiffnessError("solve_matrix: levels lie below the energy range resolvable on this grid");
  }

  double hi;
  const double thr = mesh.threshold();
  if (std::isfinite(thr)) {
    hi = thr - 1e-10 * std::max(1.0, std::abs(thr));
    if (!(hi > lo)) throw ConvergenceError("solve_matrix: no bound-state window below threshold");
    const int avail = mesh.count_below(hi);
    if (avail < k) {
      throw ConvergenceError(fmt::format(
          "solve_matrix: only {} bound states below the threshold on this grid, {} requested",
          avail, k));
    }
  } else {
    double step = std::max(1.0, std::abs(lo));
    hi = lo + step;
    int it = 0;
    while (mesh.count_below(hi) < k) {
      step *= 2.0;
      hi = lo + step;
      if (++it > opt.max_iterations) {
        throw ConvergenceError("solve_matrix: could not bracket the requested levels");
      }
    }
  }

  // Bisection on all requested levels at once: every Sturm count narrows the
  // brackets of every level it separates. Once a level's bracket is small,
  // Illinois steps on the twisted pivot gamma_k (zero at the level) propose
  // the next point; the Sturm count still decides which side moves.
  std::vector<double> a_lvl(k, lo), b_lvl(k, hi);
  std::vector<Eigenpair> out;
  std::vector<double> d;
  for (int level = 0; level < k; ++level) {
    double& a = a_lvl[level];
    double& b = b_lvl[level];
    double ga = 0.0, gb = 0.0;
    bool have_a = false, have_b = false;
    int twist = -1;
    int side = 0;
    int it = 0;
    while (b - a > opt.energy_tol * std::max(1.0, std::abs(a))) {
      double x = 0.5 * (a + b);
      const bool fine = b - a < 1e-3 * std::max(1.0, std::abs(a));
      if (fine && twist < 0) {
        mesh.diagonal(x, d);
        twist = best_twist(d);
      }
      if (twist >= 0 && have_a && have_b) {
        const double fa = -std::abs(ga), fb = std::abs(gb);
        const double r = a - fa * (b - a) / (fb - fa);
        if (r > a && r < b) x = r;
      }
      if (x <= a || x >= b) break;
      int c;
      double gx = 0.0;
      if (twist >= 0) {
        mesh.diagonal(x, d);
        c = count_from_diagonal(d);
        gx = twisted_gamma(d, twist);
      } else {
        c = mesh.count_below(x);
      }
      for (int l = level + 1; l < k; ++l) {
        if (c > l) {
          b_lvl[l] = std::min(b_lvl[l], x);
        } else {
          a_lvl[l] = std::max(a_lvl[l], x);
        }
      }
      if (c > level) {
        b = x;
        gb = gx;
        have_b = twist >= 0;
        if (side == 1 && have_a) ga *= 0.5;
        side = 1;
      } else {
        a = x;
        ga = gx;
        have_a = twist >= 0;
        if (side == -1 && have_b) gb *= 0.5;
        side = -1;
      }
      if (++it > opt.max_iterations) {
        throw ConvergenceError("solve_matrix: bisection did not converge");
      }
    }
    const double e = 0.5 * (a + b);
    mesh.diagonal(e, d);
    const std::vector<double> phi = twisted_eigenvector(d);
    out.push_back({e, mesh.to_radial(phi, e)});
    for (int l = level + 1; l < k; ++l) a_lvl[l] = std::max(a_lvl[l], b);
  }
  return out;
}

namespace {

struct ShotResult {
  double mismatch = 0.0;
  std::vector<double> phi;  // active nodes
};

constexpr double kRescale = 1e200;

// Normalized discrete Wronskian between the outward and inward solutions.
// Zero exactly at eigenvalues of the discrete problem and free of poles.
ShotResult shoot(const detail::NumerovMesh& mesh, double e, bool keep) {
  const int first = mesh.first();
  const int last = mesh.last();
  const int n = last - first + 1;

  // Matching index: outer classical turning point at this energy, so that
  // neither integration runs against a growing solution.
  int m = -1;
  for (int i = last - 2; i >= first + 2; --i) {
    if (mesh.effective_potential(i) < e) {
      m = i;
      break;
    }
  }
  if (m < 0) m = first + n / 2;
  m = std::clamp(m, first + 2, last - 2);

  std::vector<double> out(m + 2 - first);
  out[0] = mesh.w(first, e);
  double ghost = mesh.inner_ghost_phi_ratio(e) * out[0];
  double prev = ghost;
  for (int i = first; i <= m; ++i) {
    const int j = i - first;
    const double next = 2.0 * mesh.s(i, e) * out[j] - prev;
    prev = out[j];
    out[j + 1] = next;
    if (std::abs(next) > kRescale) {
      for (int q = 0; q <= j + 1; ++q) out[q] /= kRescale;
      prev /= kRescale;
    }
    if (!std::isfinite(next)) throw StiffnessError("shooting: outward integration overflowed");
  }

  std::vector<double> in(last - (m - 1) + 1);  // nodes m-1..last
  const int off = m - 1;
  in[last - off] = mesh.w(last, e);
  prev = mesh.outer_ghost_phi_ratio(e) * in[last - off];
  for (int i = last; i >= m; --i) {
    const int j = i - off;
    const double next = 2.0 * mesh.s(i, e) * in[j] - prev;
    prev = in[j];
    in[j - 1] = next;
    if (std::abs(next) > kRescale) {
      for (int q = j - 1; q <= last - off; ++q) in[q] /= kRescale;
      prev /= kRescale;
    }
    if (!std::isfinite(next)) throw StiffnessError("shooting: inward integration overflowed");
  }

  const double o1 = out[m - 1 - first];
  const double o2 = out[m - first];
  const double i1 = in[0];
  const double i2 = in[1];
  const double wr = o1 * i2 - o2 * i1;
  const double scale = std::hypot(o1, o2) * std::hypot(i1, i2);
  ShotResult res;
  res.mismatch = wr / scale;
  if (!std::isfinite(res.mismatch)) throw StiffnessError("shooting: mismatch not finite");
  if (keep) {
    res.phi.resize(n);
    const bool use_m = std::abs(i2) >= std::abs(i1);
    const double c = use_m ? o2 / i2 : o1 / i1;
    for (int i = first; i <= last; ++i) {
      res.phi[i - first] = i <= m ? out[i - first] : c * in[i - off];
    }
  }
  return res;
}

}  // namespace

Eigenpair solve_shooting(const RadialProblem& problem, const RobinBoundary& inner,
                         const OuterBoundary& outer, std::pair<double, double> e_bracket,
                         const ShootingOptions& opt) {
  const detail::NumerovMesh mesh(problem, inner, outer);
  double lo = std::min(e_bracket.first, e_bracket.second);
  double hi = std::max(e_bracket.first, e_bracket.second);
  if (!(lo > mesh.lowest_regular_energy())) {
    throw StiffnessError("solve_shooting: bracket extends below the energy range resolvable on this grid");
  }
  if (!(hi < mesh.threshold())) {
    throw DomainError("solve_shooting: bracket must lie below the continuum threshold W0");
  }
  double flo = shoot(mesh, lo, false).mismatch;
  double fhi = shoot(mesh, hi, false).mismatch;
  if (flo == 0.0) return {lo, mesh.to_radial(shoot(mesh, lo, true).phi, lo)};
  if (fhi == 0.0) return {hi, mesh.to_radial(shoot(mesh, hi, true).phi, hi)};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSignChange(fmt::format(
        "solve_shooting: mismatch has the same sign at E = {} and E = {}", lo, hi));
  }

  // Bisection to a coarse bracket, then secant steps kept inside the bracket.
  int it = 0;
  double e = 0.5 * (lo + hi);
  while (hi - lo > opt.energy_tol * std::max(1.0, std::abs(e))) {
    if (++it > opt.max_iterations) throw NoConvergence("solve_shooting: no convergence");
    const bool coarse = hi - lo > 1e-4 * std::max(1.0, std::abs(e));
    double trial = 0.5 * (lo + hi);
    if (!coarse) {
      const double sec = hi - fhi * (hi - lo) / (fhi - flo);
      const double margin = 1e-3 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin) trial = sec;
    }
    if (trial <= lo || trial >= hi) break;
    const double f = shoot(mesh, trial, false).mismatch;
    e = trial;
    if (f == 0.0) {
      lo = hi = trial;
      break;
    }
    if ((f > 0.0) == (flo > 0.0)) {
      lo = trial;
      flo = f;
    } else {
      hi = trial;
      fhi = f;
    }
  }
  e = std::abs(flo) < std::abs(fhi) ? lo : hi;
  const ShotResult res = shoot(mesh, e, true);
  if (std::abs(res.mismatch) > opt.mismatch_tol) {
    throw NoConvergence(fmt::format("solve_shooting: final mismatch {:.3g} above tolerance",
                                    res.mismatch));
  }
  return {e, mesh.to_radial(res.phi, e)};
}

double shooting_mismatch(const RadialProblem& problem, const RobinBoundary& inner,
                         const OuterBoundary& outer, double e) {
  const detail::NumerovMesh mesh(problem, inner, outer);
  if (!(e > mesh.lowest_regular_energy())) {
    throw StiffnessError("shooting: energy below the range resolvable on this grid");
  }
  if (!(e < mesh.threshold())) throw DomainError("shooting: energy must lie below the continuum threshold");
  return shoot(mesh, e, false).mismatch;
}

std::vector<std::pair<double, double>> shooting_brackets(const RadialProblem& problem,
                                                         const RobinBoundary& inner,
                                                         const OuterBoundary& outer, int k) {
  if (k < 1) throw DomainError("shooting_brackets: k must be at least 1");
  const detail::NumerovMesh mesh(problem, inner, outer);
  const double e_floor = mesh.lowest_regular_energy();
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.size(); ++i) vmin = std::min(vmin, mesh.effective_potential(i));
  double lo = vmin - 1e-3 * std::max(1.0, std::abs(vmin));
  if (lo <= e_floor) lo = e_floor + 1e-9 * std::max(1.0, std::abs(e_floor));

  constexpr double kRatio = 0.97;
  constexpr int kMaxSteps = 20000;
  const double thr = mesh.threshold();
  const double gap_min = 1e-9 * std::max(1.0, std::abs(thr));
  std::vector<std::pair<double, double>> out;
  double e_prev = lo;
  double f_prev = shoot(mesh, lo, false).mismatch;
  double dist = std::isfinite(thr) ? thr - lo : 0.0;
  double step = 1e-3 * std::max(1.0, std::abs(lo));
  for (int it = 0; it < kMaxSteps && static_cast<int>(out.size()) < k; ++it) {
    double e;
    if (std::isfinite(thr)) {
      dist *= kRatio;
      if (dist < gap_min) break;
      e = thr - dist;
    } else {
      e = e_prev + step;
      step *= 1.0 / kRatio;
    }
    const double f = shoot(mesh, e, false).mismatch;
    if (f == 0.0 || (f > 0.0) != (f_prev > 0.0)) out.emplace_back(e_prev, e);
    e_prev = e;
    f_prev = f;
  }
  if (static_cast<int>(out.size()) < k) {
    throw ConvergenceError(fmt::format(
        "shooting_brackets: found {} sign changes below the threshold, {} requested",
        out.size(), k));
  }
  return out;
}

Eigenpair solve_shooting(const RadialProblem&, const RobinBoundary&, const PeriodicBoundary&,
                         std::pair<double, double>, const ShootingOptions&) {
  throw DomainError("periodic boundary conditions are not supported by the radial solvers");
}

std::vector<Eigenpair> solve_matrix(const RadialProblem&, const RobinBoundary&,
                                    const PeriodicBoundary&, int, const MatrixOptions&) {
  throw DomainError("periodic boundary conditions are not supported by the radial solvers");
}

double outer_log_derivative(const RadialFunction& f) {
  f.validate();
  const std::size_t n = f.grid.size();
  if (n < 5) throw DomainError("outer_log_derivative: need at least 5 points");
  const double dx = std::log(f.grid[n - 1] / f.grid[n - 2]);
  double l[5];
  for (int k = 0; k < 5; ++k) {
    const double v = f.values[n - 1 - k];
    if (v == 0.0) throw DomainError("outer_log_derivative: function vanishes near r_max");
    l[k] = std::log(std::abs(v));
  }
  const double dldx = (25.0 * l[0] - 48.0 * l[1] + 36.0 * l[2] - 16.0 * l[3] + 3.0 * l[4]) / (12.0 * dx);
  return dldx / f.grid[n - 1];
}

PotentialTable read_potential_table(std::istream& is) {
  PotentialTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    double r = 0.0;
    double v = 0.0;
    if (!(ss >> r)) throw ParseError("potential table: expected r", lineno, static_cast<int>(start) + 1);
    if (!(ss >> v)) throw ParseError("potential table: expected V after r", lineno, static_cast<int>(start) + 1);
    std::string extra;
    if (ss >> extra) throw ParseError("potential table: more than two columns", lineno, static_cast<int>(start) + 1);
    if (!t.r.empty() && !(r > t.r.back())) {
      throw ParseError("potential table: r must be strictly increasing", lineno, static_cast<int>(start) + 1);
    }
    t.r.push_back(r);
    t.v.push_back(v);
  }
  if (t.r.size() < 2) throw ParseError("potential table: need at least two rows", lineno, 1);
  return t;
}

std::vector<double> interpolate_potential(const PotentialTable& table,
                                          const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  const double tol = 1e-12 * std::max(1.0, table.r.back());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    if (r < table.r.front() - tol || r > table.r.back() + tol) {
      throw DomainError(fmt::format("extra potential: r = {} outside the table range", r));
    }
    auto it = std::upper_bound(table.r.begin(), table.r.end(), r);
    std::size_t j = std::clamp<std::size_t>(it - table.r.begin(), 1, table.r.size() - 1);
    const double t = (r - table.r[j - 1]) / (table.r[j] - table.r[j - 1]);
    out[i] = table.v[j - 1] + t * (table.v[j] - table.v[j - 1]);
  }
  return out;
}

}  // namespace cuspbc
