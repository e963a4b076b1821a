#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "cuspbc/cusp_limits.hpp"
#include "cuspbc/errors.hpp"
#include "cuspbc/radial_solver.hpp"
#include "oracles/hydrogen.hpp"

using namespace cuspbc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RadialProblem hydrogen_problem(int ell, double Z, std::vector<double> grid = log_grid()) {
  RadialProblem p;
  p.ell = ell;
  p.mass = 1.0;
  p.pair_product = -Z;
  p.w0 = 0.0;
  p.grid = std::move(grid);
  return p;
}

// n-th positive zero of j_l by scanning and bisection.
double sph_bessel_zero(int l, int n) {
  int found = 0;
  double x = 1e-3, step = 1e-2;
  double fx = std::sph_bessel(l, x);
  while (true) {
    const double y = x + step;
    const double fy = std::sph_bessel(l, y);
    if ((fx > 0) != (fy > 0)) {
      double a = x, b = y;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if ((std::sph_bessel(l, m) > 0) == (std::sph_bessel(l, a) > 0)) a = m; else b = m;
      }
      if (++found == n) return 0.5 * (a + b);
    }
    x = y;
    fx = fy;
  }
}

}  // namespace

TEST_CASE("robin_inner examples", "[radial_solver]") {
  const auto h = robin_inner(0, -1.0);
  CHECK(h.location == BoundaryLocation::inner);
  CHECK(h.c_dpsi == 1.0);
  CHECK(h.c_psi == 1.0);
  const auto ee = robin_inner(0, 0.5);
  CHECK(ee.c_psi == -0.5);
  const auto neu = robin_inner(2, 0.0);
  CHECK(neu.c_psi == 0.0);
  CHECK(neu.log_derivative() == 0.0);
  CHECK_THROWS_AS((RobinBoundary{BoundaryLocation::inner, 0.0, 0.0}.validate()), DomainError);
}

TEST_CASE("robin_outer examples", "[radial_solver]") {
  const SystemAsymptotics h{1.0, 0.0, -0.5};
  CHECK(h.decay() == 1.0);
  CHECK(h.power() == 0.0);
  const auto b = robin_outer(h, 20.0);
  CHECK(b.location == BoundaryLocation::outer);
  CHECK(b.log_derivative() == -1.0);
  const SystemAsymptotics hep{1.0, 1.0, -2.0};
  CHECK(hep.decay() == 2.0);
  CHECK(hep.power() == 0.0);
  CHECK(robin_outer(hep, 10.0).log_derivative() == -2.0);
  CHECK_THROWS_AS(robin_outer(h, 19.0), DomainError);
  CHECK_THROWS_AS((SystemAsymptotics{1.0, 0.0, 0.1}.decay()), DomainError);
}

TEST_CASE("asymptotic tail", "[radial_solver]") {
  const SystemAsymptotics h{1.0, 0.0, -0.5};
  for (double r : {1.0, 5.0, 20.0}) CHECK_THAT(asymptotic_tail(h, 2.0, r), WithinRel(2.0 * std::exp(-r), 1e-15));
  const SystemAsymptotics anion{1.3, -1.0, -0.2};
  CHECK(anion.power() == -1.0);
  const double k = std::sqrt(2 * 1.3 * 0.2);
  CHECK_THAT(asymptotic_tail(anion, 1.0, 3.0), WithinRel(std::exp(-k * 3.0) / 3.0, 1e-14));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> um(0.5, 3.0), uq(-1.0, 3.0), ue(-2.0, -0.05);
  for (int i = 0; i < 20; ++i) {
    const SystemAsymptotics s{um(rng), uq(rng), ue(rng)};
    const double r = 50.0, h = 1e-2;
    auto lf = [&](double x) { return std::log(asymptotic_tail(s, 1.0, x)); };
    const double d = (lf(r - 2 * h) - 8 * lf(r - h) + 8 * lf(r + h) - lf(r + 2 * h)) / (12 * h);
    CHECK_THAT(d, WithinAbs(s.kappa(50.0), 1e-10));
  }
}

TEST_CASE("hydrogen_reference", "[radial_solver]") {
  const auto h1 = hydrogen_reference(1, 0, 1.0);
  CHECK(h1.energy == -0.5);
  CHECK(h1.series.coeffs == std::vector<double>{1.0, -1.0, 0.5});
  const auto h2 = hydrogen_reference(2, 1, 1.0);
  CHECK(h2.energy == -0.125);
  CHECK(h2.series.coeffs == std::vector<double>{1.0, -0.5, 0.125});
  CHECK_THAT(hydrogen_reference(3, 0, 2.0).energy, WithinRel(-2.0 / 9.0, 1e-15));
  CHECK_THROWS_AS(hydrogen_reference(2, 2, 1.0), DomainError);
  // Cross-check the series against the analytic radial functions.
  for (auto [n, l] : {std::pair{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {3, 2}, {4, 2}}) {
    const auto ref = hydrogen_reference(n, l, 1.4);
    const auto taylor = oracle::hydrogen_u_taylor(n, l, 1.4);
    CHECK_THAT(ref.series.coeffs[1], WithinAbs(taylor[1], 1e-13));
    CHECK_THAT(ref.series.coeffs[2], WithinAbs(taylor[2], 1e-13));
  }
}

TEST_CASE("log grid and problem validation", "[radial_solver]") {
  const auto g = log_grid(1e-5, 40.0, 2000);
  CHECK(g.size() == 2000);
  CHECK(g.front() == 1e-5);
  CHECK(g.back() == 40.0);
  auto p = hydrogen_problem(0, 1.0);
  CHECK_NOTHROW(p.validate());
  p.grid[10] *= 1.001;
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(hydrogen_problem(0, 1.0, log_grid(1e-5, 40.0, 40)).validate(), DomainError);
  auto q = hydrogen_problem(0, 1.0);
  q.extra_potential = std::vector<double>(10, 0.0);
  CHECK_THROWS_AS(q.validate(), DomainError);
}

TEST_CASE("matrix and shooting reproduce the hydrogen spectrum", "[radial_solver]") {
  for (double Z : {1.0, 2.0}) {
    for (auto [n, l] : {std::pair{1, 0}, {2, 0}, {2, 1}, {3, 2}}) {
      CAPTURE(Z, n, l);
      const auto p = hydrogen_problem(l, Z);
      const auto in = robin_inner(l, -Z / (l + 1));
      const double e = -Z * Z / (2.0 * n * n);
      const auto levels = solve_matrix(p, in, AsymptoticBoundary{}, n - l);
      REQUIRE(levels.size() == static_cast<std::size_t>(n - l));
      CHECK_THAT(levels.back().energy, WithinAbs(e, 1e-6));
      const auto sh = solve_shooting(p, in, AsymptoticBoundary{}, {1.05 * e, 0.95 * e});
      CHECK_THAT(sh.energy, WithinAbs(e, 1e-8));
      CHECK_THAT(sh.energy, WithinAbs(levels.back().energy, 1e-6));
      // Inner Robin condition propagates to the physical cusp.
      CHECK_THAT(cusp_limit_first(levels.back().f, l), WithinAbs(-Z, 1e-6));
      CHECK_THAT(cusp_limit_first(sh.f, l), WithinAbs(-Z, 1e-6));
    }
  }
}

TEST_CASE("shooting examples", "[radial_solver]") {
  const auto p0 = hydrogen_problem(0, 1.0);
  CHECK_THAT(solve_shooting(p0, robin_inner(0, -1.0), AsymptoticBoundary{}, {-0.6, -0.4}).energy,
             WithinAbs(-0.5, 1e-8));
  const auto p1 = hydrogen_problem(1, 1.0);
  CHECK_THAT(solve_shooting(p1, robin_inner(1, -0.5), AsymptoticBoundary{}, {-0.2, -0.1}).energy,
             WithinAbs(-0.125, 1e-8));
  auto pw = hydrogen_problem(0, 1.0);
  pw.w0 = 0.25;
  CHECK_THAT(solve_shooting(pw, robin_inner(0, -1.0), AsymptoticBoundary{}, {-0.35, -0.15}).energy,
             WithinAbs(-0.25, 1e-8));
  CHECK_THROWS_AS(solve_shooting(p0, robin_inner(0, -1.0), AsymptoticBoundary{}, {-0.45, -0.3}),
                  NoSignChange);
  CHECK_THROWS_AS(solve_shooting(p0, robin_inner(0, -1.0), AsymptoticBoundary{}, {-0.6, 0.1}),
                  DomainError);
}

TEST_CASE("eigenfunctions are normalized and match analytic hydrogen", "[radial_solver]") {
  // r_max = 60 so the O(1/r^2) remainder of the outer condition does not show
  // in the 3p tail.
  const auto p = hydrogen_problem(1, 1.0, log_grid(1e-5, 60.0, 2000));
  const auto ev = solve_matrix(p, robin_inner(1, -0.5), AsymptoticBoundary{}, 2);
  for (int k = 0; k < 2; ++k) {
    const int n = k + 2;
    double maxerr = 0.0;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      maxerr = std::max(maxerr, std::abs(ev[k].f.values[i] - oracle::hydrogen_R(n, 1, 1.0, p.grid[i])));
    }
    CHECK(maxerr < 1e-7);
  }
}

TEST_CASE("outer log-derivative follows kappa for nodeless states", "[radial_solver]") {
  // Nodeless states r^(n-1) e^{-Zr/n} have no O(1/r^2) remainder in their
  // log-derivative; the far tail of a log grid needs k * dr small.
  struct Case { double Z; int n; int points; };
  for (const auto& c : {Case{1.0, 1, 2000}, Case{1.0, 2, 2000}, Case{1.0, 3, 2000},
                        Case{2.0, 2, 2000}, Case{2.0, 3, 2000}, Case{2.0, 1, 4000}}) {
    const int l = c.n - 1;
    const auto p = hydrogen_problem(l, c.Z, log_grid(1e-5, 40.0, c.points));
    const auto ev = solve_matrix(p, robin_inner(l, -c.Z / (l + 1)), AsymptoticBoundary{}, 1);
    const SystemAsymptotics sys{1.0, c.Z - 1.0, ev[0].energy};
    CAPTURE(c.Z, c.n, c.points);
    CHECK_THAT(outer_log_derivative(ev[0].f), WithinAbs(sys.kappa(40.0), 1e-5));
  }
}

TEST_CASE("fixed Robin outer boundary from robin_outer", "[radial_solver]") {
  // Hydrogen 1s: kappa = -1 exactly, so the fixed condition is exact.
  const auto p = hydrogen_problem(0, 1.0);
  const auto outer = robin_outer(SystemAsymptotics{1.0, 0.0, -0.5}, 40.0);
  const auto ev = solve_matrix(p, robin_inner(0, -1.0), outer, 1);
  CHECK_THAT(ev[0].energy, WithinAbs(-0.5, 1e-8));
  const auto sh = solve_shooting(p, robin_inner(0, -1.0), outer, {-0.6, -0.4});
  CHECK_THAT(sh.energy, WithinAbs(ev[0].energy, 1e-10));
}

TEST_CASE("spherical Bessel box levels", "[radial_solver]") {
  const double R = 6.0, M = 1.0;
  for (int l : {0, 1, 2}) {
    RadialProblem p;
    p.ell = l;
    p.mass = M;
    p.pair_product = 0.0;
    p.w0 = 0.0;
    p.grid = log_grid(1e-5, R, 2000);
    const RobinBoundary dirichlet{BoundaryLocation::outer, 0.0, 1.0};
    const auto ev = solve_matrix(p, robin_inner(l, 0.0), dirichlet, 3);
    for (int n = 1; n <= 3; ++n) {
      const double j = sph_bessel_zero(l, n);
      CAPTURE(l, n);
      CHECK_THAT(ev[n - 1].energy, WithinRel(j * j / (2 * M * R * R), 1e-7));
    }
    const double j1 = sph_bessel_zero(l, 1);
    const double e1 = j1 * j1 / (2 * M * R * R);
    CHECK_THAT(solve_shooting(p, robin_inner(l, 0.0), dirichlet, {0.9 * e1, 1.1 * e1}).energy,
               WithinRel(e1, 1e-7));
  }
}

TEST_CASE("constant shifts move every eigenvalue by exactly c", "[radial_solver]") {
  for (int l : {0, 1}) {
    const auto base = hydrogen_problem(l, 1.0);
    const auto in = robin_inner(l, -1.0 / (l + 1));
    const auto e0 = solve_matrix(base, in, AsymptoticBoundary{}, 3);
    for (double c : {0.37, -1.25, 3.0}) {
      auto shifted = base;
      shifted.w0 = c;
      const auto e1 = solve_matrix(shifted, in, AsymptoticBoundary{}, 3);
      for (int k = 0; k < 3; ++k) CHECK_THAT(e1[k].energy - e0[k].energy, WithinAbs(c, 1e-12));
      // Same through a constant extra potential with a fixed outer condition.
      const RobinBoundary outer{BoundaryLocation::outer, 1.0, 1.0};
      auto extra = base;
      extra.extra_potential = std::vector<double>(base.grid.size(), c);
      const auto f0 = solve_matrix(base, in, outer, 2);
      const auto f1 = solve_matrix(extra, in, outer, 2);
      for (int k = 0; k < 2; ++k) CHECK_THAT(f1[k].energy - f0[k].energy, WithinAbs(c, 1e-12));
    }
  }
}

TEST_CASE("mesh doubling reduces the error at least 3.5 times", "[radial_solver]") {
  for (auto [n, l] : {std::pair{1, 0}, {2, 1}}) {
    double prev = 0.0;
    for (int pts : {250, 500, 1000}) {
      const auto p = hydrogen_problem(l, 1.0, log_grid(1e-5, 40.0, pts));
      const auto ev = solve_matrix(p, robin_inner(l, -1.0 / (l + 1)), AsymptoticBoundary{}, n - l);
      const double err = std::abs(ev.back().energy + 0.5 / (n * n));
      if (prev > 0.0) CHECK(prev / err >= 3.5);
      prev = err;
    }
  }
}

TEST_CASE("solver input checks", "[radial_solver]") {
  const auto p = hydrogen_problem(0, 1.0);
  CHECK_THROWS_AS(solve_matrix(p, robin_inner(0, -1.0), PeriodicBoundary{}, 1), DomainError);
  CHECK_THROWS_AS(solve_shooting(p, robin_inner(0, -1.0), PeriodicBoundary{}, {-1.0, -0.1}), DomainError);
  CHECK_THROWS_AS(solve_matrix(p, robin_inner(0, -1.0), AsymptoticBoundary{}, 0), DomainError);
  // A screening potential with a 1/r tail needs its charge declared.
  auto slow = p;
  slow.extra_potential = std::vector<double>(p.grid.size());
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double r = p.grid[i];
    (*slow.extra_potential)[i] = 0.5 * (1.0 - std::exp(-r)) / r;
  }
  CHECK_THROWS_AS(solve_matrix(slow, robin_inner(0, -1.0), AsymptoticBoundary{}, 1), DomainError);
  const auto ok = solve_matrix(slow, robin_inner(0, -1.0), AsymptoticBoundary{0.5}, 1);
  CHECK(ok[0].energy > -0.5);
  CHECK(ok[0].energy < -0.125);
  CHECK_THROWS_AS(solve_matrix(p, robin_outer(SystemAsymptotics{1, 0, -0.5}, 40.0), AsymptoticBoundary{}, 1),
                  DomainError);
  // Asking for more bound states than the box resolves.
  const auto small = hydrogen_problem(0, 1.0, log_grid(1e-5, 8.0, 400));
  CHECK_THROWS_AS(solve_matrix(small, robin_inner(0, -1.0), AsymptoticBoundary{}, 12), ConvergenceError);
}

TEST_CASE("potential tables", "[radial_solver]") {
  std::istringstream ok("# r V\n0.1 1.0\n0.2 2.0\n\n0.4 0.0\n");
  const auto t = read_potential_table(ok);
  REQUIRE(t.r.size() == 3);
  const auto v = interpolate_potential(t, {0.1, 0.15, 0.3, 0.4});
  const std::vector<double> want{1.0, 1.5, 1.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) CHECK_THAT(v[i], WithinAbs(want[i], 1e-15));
  CHECK_THROWS_AS(interpolate_potential(t, {0.05}), DomainError);
  std::istringstream bad("0.1 1.0\n0.2\n");
  try {
    read_potential_table(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream unsorted("0.2 1.0\n0.1 2.0\n");
  CHECK_THROWS_AS(read_potential_table(unsorted), ParseError);
}

TEST_CASE("radial function CSV round trip", "[radial_solver]") {
  RadialFunction f;
  f.grid = {0.1, 0.2, 0.3};
  f.values = {1.0 / 3.0, -2.5e-17, 7.0};
  f.ell = 2;
  f.meaning = RadialMeaning::u;
  std::stringstream ss;
  write_radial_csv(ss, f);
  CHECK(ss.str().rfind("r,value,ell,meaning\n", 0) == 0);
  const auto g = read_radial_csv(ss);
  CHECK(g.grid == f.grid);
  CHECK(g.values == f.values);
  CHECK(g.ell == 2);
  CHECK(g.meaning == RadialMeaning::u);
  std::istringstream bad("r,value,ell,meaning\n0.1,1.0,0,Q\n");
  CHECK_THROWS_AS(read_radial_csv(bad), ParseError);
}
