#include "cuspbc/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "cuspbc/cli/pair_preset.hpp"
#include "cuspbc/cusp.hpp"
#include "cuspbc/cusp_limits.hpp"
#include "cuspbc/errors.hpp"
#include "cuspbc/numeric.hpp"

namespace cuspbc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(is), {});
}

void pair_metadata(Report& r, const CoalescencePair& pair) {
  r.meta("pair", describe_pair(pair));
  r.meta_number("reduced_mass", pair.reduced_mass());
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  const std::size_t end = std::min<std::size_t>(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

double tolerance_override(double fallback) {
  const char* env = std::getenv("CUSPBC_TOL");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("CUSPBC_TOL must be a positive number, got '{}'", env));
  }
  return v;
}

Report cmd_cusp(const CoalescencePair& pair, int ell, double w0, std::optional<double> e,
                int order) {
  Report r;
  r.command = "cusp";
  pair_metadata(r, pair);
  r.meta("ell", static_cast<long long>(ell));
  r.meta_number("w0", w0);
  const double a = cusp_a(pair, ell);
  r.meta_number("a", a);
  r.meta_number("validity_radius", validity_radius(pair, w0), true);
  r.meta_number("effective_bohr_radius", effective_bohr_radius(ell, a), true);
  const RobinBoundary inner = robin_inner(ell, a);
  r.meta_number("robin_c_dpsi", inner.c_dpsi);
  r.meta_number("robin_c_psi", inner.c_psi);
  r.meta_number("psi_log_derivative", (ell + 1) * a);
  if (e) {
    r.meta_number("e", *e);
    const double b = cusp_b(pair, ell, w0, *e);
    r.meta_number("b", b);
    r.meta_number("psi_second_ratio", (ell + 1.0) * (ell + 2.0) * b);
    const CuspSeries s = cusp_series(pair, ell, w0, *e, order);
    auto& t = r.table("coefficients", {"k", "a_k"});
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
      t.add_row({static_cast<long long>(k), s.coeffs[k]});
    }
  }
  return r;
}

Report cmd_local(const CoalescencePair& pair, int ell, int m, double w0, double e, double u0,
                 const LocalGrid& grid) {
  if (grid.points < 2 || !(grid.r_max > grid.r_min) || grid.r_min < 0.0) {
    throw DomainError("local: need 0 <= r_min < r_max and at least 2 points");
  }
  const LocalWavefunction lw = make_local_wavefunction(pair, ell, m, w0, e, u0);
  EvalDomain dom;
  dom.rel_tol = tolerance_override(dom.rel_tol);
  Report r;
  r.command = "local";
  pair_metadata(r, pair);
  r.meta("ell", static_cast<long long>(ell));
  r.meta("m", static_cast<long long>(m));
  r.meta_number("w0", w0);
  r.meta_number("e", e);
  r.meta_number("u0", u0);
  r.meta_number("alpha", lw.alpha);
  r.meta_number("beta", lw.beta);
  r.meta_number("kummer_a", lw.kummer_a());
  r.meta_number("kummer_b", lw.kummer_b());
  r.meta_number("validity_radius", validity_radius(pair, w0), true);
  r.meta_number("effective_bohr_radius", effective_bohr_radius(ell, cusp_a(pair, ell)), true);
  auto& t = r.table("local", {"r", "u", "rl_u", "radial_density"});
  for (int i = 0; i < grid.points; ++i) {
    const double x = grid.r_min + (grid.r_max - grid.r_min) * i / (grid.points - 1);
    const double u = local_u(lw, x, dom);
    const double psi = std::pow(x, ell) * u;
    t.add_row({x, u, psi, x * x * psi * psi});
  }
  return r;
}

SolveSetup parse_solve_problem(const std::string& text, const std::string& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("problem JSON: malformed document", line, col);
  }
  SolveSetup setup;
  try {
    RadialProblem& p = setup.problem;
    p.ell = doc.at("ell").get<int>();
    p.mass = doc.value("mass", 1.0);
    p.pair_product = doc.at("pair_product").get<double>();
    p.w0 = doc.value("w0", 0.0);
    const auto& g = doc.at("grid");
    p.grid = log_grid(g.value("r_min", 1e-5), g.value("r_max", 40.0), g.value("points", 2000));
    if (doc.contains("extra_potential")) {
      std::filesystem::path path = doc["extra_potential"].get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      std::ifstream is(path);
      if (!is) throw DomainError("cannot open potential table '" + path.string() + "'");
      p.extra_potential = interpolate_potential(read_potential_table(is), p.grid);
    }
    const double a = doc.contains("inner_a") ? doc["inner_a"].get<double>()
                                             : p.mass * p.pair_product / (p.ell + 1);
    setup.inner = robin_inner(p.ell, a);
    const nlohmann::json outer = doc.value("outer", nlohmann::json("asymptotic"));
    if (outer.is_string()) {
      if (outer.get<std::string>() != "asymptotic") {
        throw ParseError("problem JSON: outer must be \"asymptotic\" or {c_dpsi, c_psi}", 1, 1);
      }
      AsymptoticBoundary ab;
      if (doc.contains("asymptotic_charge")) ab.charge_plus_one = doc["asymptotic_charge"].get<double>();
      setup.outer = ab;
    } else {
      RobinBoundary rb{BoundaryLocation::outer, outer.at("c_dpsi").get<double>(),
                       outer.at("c_psi").get<double>()};
      rb.validate();
      setup.outer = rb;
    }
    p.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("problem JSON: ") + e.what(), 1, 1);
  }
  return setup;
}

SolveSetup read_solve_problem(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_solve_problem(read_file(path), base.empty() ? "." : base);
}

SolveMethod solve_method_from_string(const std::string& s) {
  if (s == "matrix") return SolveMethod::matrix;
  if (s == "shoot") return SolveMethod::shoot;
  if (s == "both") return SolveMethod::both;
  throw DomainError("method must be 'matrix', 'shoot' or 'both', got '" + s + "'");
}

SolveOutput cmd_solve(const SolveSetup& setup, SolveMethod method, int k, bool timing_in_report) {
  const RadialProblem& p = setup.problem;
  const double tol = tolerance_override(0.0);
  MatrixOptions mopt;
  ShootingOptions sopt;
  if (tol > 0.0) {
    mopt.energy_tol = tol;
    sopt.energy_tol = tol;
  }

  SolveOutput out;
  Report& r = out.report;
  r.command = "solve";
  r.meta("ell", static_cast<long long>(p.ell));
  r.meta_number("mass", p.mass);
  r.meta_number("pair_product", p.pair_product);
  r.meta_number("w0", p.w0);
  r.meta_number("r_min", p.grid.front());
  r.meta_number("r_max", p.grid.back());
  r.meta("points", static_cast<long long>(p.grid.size()));
  r.meta("extra_potential", std::string(p.extra_potential ? "table" : "none"));
  const double a = setup.inner.log_derivative();
  r.meta_number("inner_a", a);

  const auto* asym = std::get_if<AsymptoticBoundary>(&setup.outer);
  const double q_plus_one = asym ? asym->charge_plus_one.value_or(-p.pair_product) : 0.0;
  r.meta("outer", std::string(asym ? "asymptotic" : "robin"));
  if (asym) r.meta_number("asymptotic_charge_plus_one", q_plus_one);

  const double vx0 = p.extra_potential ? p.extra_potential->front() : 0.0;
  auto& t = r.table("levels", {"method", "n", "energy", "cusp_first", "cusp_first_expected",
                               "cusp_second", "cusp_second_expected", "outer_log_derivative",
                               "outer_log_derivative_expected"});
  auto add = [&](const char* label, int n, const Eigenpair& ev) {
    const double b = ((p.ell + 1) * a * a + p.mass * (p.w0 + vx0 - ev.energy)) / (2 * p.ell + 3);
    double expected_ld;
    if (asym) {
      const SystemAsymptotics sys{p.mass, q_plus_one - 1.0, ev.energy - p.w0};
      expected_ld = sys.kappa(p.grid.back());
    } else {
      expected_ld = std::get<RobinBoundary>(setup.outer).log_derivative();
    }
    t.add_row({std::string(label), static_cast<long long>(n), ev.energy,
               cusp_limit_first(ev.f, p.ell), (p.ell + 1) * a, cusp_limit_second(ev.f, p.ell),
               (p.ell + 1.0) * (p.ell + 2.0) * b, outer_log_derivative(ev.f), expected_ld});
    out.functions.emplace_back(fmt::format("{}_{}", label, n), ev.f);
  };

  if (method == SolveMethod::matrix || method == SolveMethod::both) {
    const auto t0 = Clock::now();
    const auto levels = solve_matrix(p, setup.inner, setup.outer, k, mopt);
    out.matrix_seconds = seconds_since(t0);
    for (int i = 0; i < k; ++i) add("matrix", i + 1, levels[i]);
  }
  if (method == SolveMethod::shoot || method == SolveMethod::both) {
    const auto t0 = Clock::now();
    const auto brackets = shooting_brackets(p, setup.inner, setup.outer, k);
    std::vector<Eigenpair> levels;
    for (int i = 0; i < k; ++i) levels.push_back(solve_shooting(p, setup.inner, setup.outer, brackets[i], sopt));
    out.shoot_seconds = seconds_since(t0);
    for (int i = 0; i < k; ++i) add("shoot", i + 1, levels[i]);
  }
  if (timing_in_report) {
    if (method != SolveMethod::shoot) r.meta_number("matrix_seconds", out.matrix_seconds);
    if (method != SolveMethod::matrix) r.meta_number("shoot_seconds", out.shoot_seconds);
  }
  return out;
}

std::pair<Report, CuspBasis> cmd_basis(const CoalescencePair& pair, const BasisRequest& req) {
  const double a = cusp_a(pair, req.ell);
  const double b = cusp_b(pair, req.ell, req.w0, req.e);
  const CuspBasis basis = build_basis(req.kind, req.ell, a, b, req.tail_exponents, req.L, req.options);
  const CuspOrders exact = verify_cusp_orders(basis);

  // Sampled check through the origin fit on a fine uniform grid.
  std::vector<double> grid;
  const double span = std::min(1e-4, basis.cutoff.value_or(1.0));
  for (int i = 1; i <= 400; ++i) grid.push_back(span * i / 400.0);
  const CuspOrders sampled = verify_cusp_orders(basis.sample(grid), req.ell);

  Report r;
  r.command = "basis";
  pair_metadata(r, pair);
  r.meta("kind", std::string(to_string(req.kind)));
  r.meta("ell", static_cast<long long>(req.ell));
  r.meta_number("w0", req.w0);
  r.meta_number("e", req.e);
  r.meta_number("a", a);
  r.meta_number("b", b);
  r.meta_number("a_est", exact.a_est);
  r.meta_number("b_est", exact.b_est);
  r.meta_number("a_est_sampled", sampled.a_est);
  r.meta_number("b_est_sampled", sampled.b_est);
  if (basis.cutoff) r.meta_number("cutoff", *basis.cutoff);
  auto& t = r.table("terms", {"role", "type", "coeff", "power", "i", "j", "k", "exponent"});
  for (const auto& s : basis.slater_head) {
    t.add_row({std::string("head"), std::string("S"), s.coeff, static_cast<long long>(s.power), 0LL, 0LL, 0LL, s.zeta});
  }
  for (const auto& s : basis.gaussian_head) {
    t.add_row({std::string("head"), std::string("R"), s.coeff, static_cast<long long>(s.power), 0LL, 0LL, 0LL, s.g});
  }
  for (const auto& s : basis.slater_tail) {
    t.add_row({std::string("tail"), std::string("S"), s.coeff, static_cast<long long>(s.power), 0LL, 0LL, 0LL, s.zeta});
  }
  for (const auto& g : basis.gaussian_tail) {
    t.add_row({std::string("tail"), std::string("G"), g.coeff, static_cast<long long>(g.total_power()),
               static_cast<long long>(g.i), static_cast<long long>(g.j), static_cast<long long>(g.k), g.g});
  }
  return {r, basis};
}

Report cmd_env(const Environment& env, const CoalescencePair& pair, std::vector<double> probes,
               int lambda_max, double theta, double phi) {
  env.validate();
  pair.validate();
  if (lambda_max < 0) throw DomainError("env: lambda_max must be non-negative");
  const double rc = env.convergence_radius();
  if (probes.empty()) probes = {0.1 * rc, 0.25 * rc, 0.5 * rc};
  const double base = w0(env, pair);

  Report r;
  r.command = "env";
  pair_metadata(r, pair);
  r.meta("charges", static_cast<long long>(env.charges.size()));
  r.meta_number("w0", base);
  r.meta_number("convergence_radius", rc);
  r.meta_number("theta", theta);
  r.meta_number("phi", phi);
  const bool identical = pair.q1 == pair.q2 && pair.m1 == pair.m2;
  r.meta("identical_pair", std::string(identical ? "yes" : "no"));

  // Coefficient of r^lambda along (theta, phi) at a reference radius inside
  // the convergence sphere.
  const double r_ref = 0.5 * rc;
  auto& mt = r.table("multipole", {"lambda", "pair_factor", "coefficient", "odd_zero"});
  bool odd_clean = true;
  for (int l = 0; l <= lambda_max; ++l) {
    const double f = multipole_pair_factor(pair, l);
    const double c = w_multipole_term(env, pair, r_ref, theta, phi, l) / std::pow(r_ref, l);
    std::string flag = "n/a";
    if (identical && l % 2 == 1) {
      const bool zero = f == 0.0 && c == 0.0;
      odd_clean = odd_clean && zero;
      flag = zero ? "yes" : "no";
    }
    mt.add_row({static_cast<long long>(l), f, c, flag});
  }
  if (identical) r.meta("odd_terms_vanish", std::string(odd_clean ? "yes" : "no"));

  auto& at = r.table("average", {"r", "spherical_average", "residual", "w_exact", "w_multipole"});
  for (double x : probes) {
    if (!(x > 0.0)) throw DomainError("env: probe radii must be positive");
    const double avg = spherical_average_w(env, pair, x);
    const double exact = w_exact(env, pair, x, theta, phi);
    const double mp = x < 0.999 * rc ? w_multipole(env, pair, x, theta, phi, lambda_max)
                                     : std::numeric_limits<double>::quiet_NaN();
    at.add_row({x, avg, std::abs(avg - base), exact, mp});
  }
  return r;
}

Report cmd_compare_he(const HfrOrbital& orbital, const CompareHeOptions& opt) {
  orbital.validate();
  if (opt.points < 2 || !(opt.r_max > 0.0)) throw DomainError("compare-he: bad output grid");
  const CoalescencePair pair = electron_nucleus(opt.Z, opt.A);
  const double norm = std::sqrt(orbital.norm());
  auto psi_hfr = [&](double r) { return orbital(r) / norm; };
  const double inv_r = orbital.mean_inverse_r();
  const double w = (pair.q1 + pair.q2) * inv_r;
  const int ell = 0;
  LocalWavefunction lw = make_local_wavefunction(pair, ell, 0, w, opt.energy, 1.0);
  EvalDomain dom;
  dom.rel_tol = tolerance_override(dom.rel_tol);

  const double a = cusp_a(pair, ell);
  const double r0 = opt.r0_kind == R0Kind::cusp ? effective_bohr_radius(ell, a)
                                                : orbital.density_maximum();

  // Least-squares u0 on [0, r0/4].
  constexpr int kMatch = 200;
  CompensatedSum num, den;
  for (int j = 0; j <= kMatch; ++j) {
    const double x = 0.25 * r0 * j / kMatch;
    const double k = local_u(lw, x, dom);
    num += k * psi_hfr(x);
    den += k * k;
  }
  lw.u0 = num.value() / den.value();

  auto rel_error = [&](double x) {
    const double h = psi_hfr(x);
    const double k = local_u(lw, x, dom);
    return std::abs(k * k - h * h) / (h * h);
  };

  Report r;
  r.command = "compare-he";
  pair_metadata(r, pair);
  r.meta("energy_kind", std::string(opt.energy_kind == EnergyKind::total ? "total" : "orbital"));
  r.meta_number("energy", opt.energy);
  r.meta_number("mean_inverse_r", inv_r);
  r.meta_number("w0", w);
  r.meta_number("alpha", lw.alpha);
  r.meta_number("beta", lw.beta);
  r.meta("r0_kind", std::string(opt.r0_kind == R0Kind::cusp ? "cusp" : "density-max"));
  r.meta_number("r0", r0);
  r.meta_number("u0", lw.u0);
  r.meta_number("validity_radius", validity_radius(pair, w), true);
  r.meta_number("rel_error_r0", rel_error(r0));
  r.meta_number("rel_error_half_r0", rel_error(0.5 * r0));

  auto& t = r.table("comparison", {"r", "psi_hfr", "psi_kummer", "density_hfr", "density_kummer",
                                   "rel_error"});
  for (int i = 0; i < opt.points; ++i) {
    const double x = opt.r_max * i / (opt.points - 1);
    const double h = psi_hfr(x);
    const double k = local_u(lw, x, dom);
    t.add_row({x, h, k, x * x * h * h, x * x * k * k, std::abs(k * k - h * h) / (h * h)});
  }
  return r;
}

namespace {

struct Common {
  std::string output;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--output", c.output, "Write the report to this file");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  int col = 1;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw ParseError("list: '" + item + "' is not a number", 1, col);
    }
    out.push_back(v);
    col += static_cast<int>(item.size()) + 1;
  }
  return out;
}

void emit(const Report& r, const Common& c, std::ostream& out) {
  const Format f = format_from_string(c.format);
  if (c.output.empty()) {
    write_report(out, r, f);
    return;
  }
  std::ofstream os(c.output, std::ios::binary);
  if (!os) throw DomainError("cannot write '" + c.output + "'");
  write_report(os, r, f);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalescence cusp conditions, local wave functions and radial solvers", "cuspbc"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> pair_tokens;
  bool fixed = false;
  int ell = 0, m = 0, order = 10, k = 1, lambda_max = 10, L = 2;
  double w0v = 0.0, u0 = 1.0, g0 = 1.0, theta = 0.0, phi = 0.0;
  std::optional<double> e;
  std::optional<double> cutoff;
  LocalGrid grid;
  std::string path, method = "matrix", functions_dir, kind_text = "slater", tails, coeffs, probes,
              basis_file;
  bool timing = false;
  CompareHeOptions he;
  std::string energy_kind = "total", r0_kind = "cusp";
  std::optional<int> mass_number;

  auto* cusp = app.add_subcommand("cusp", "Cusp coefficients, series and inner Robin condition");
  cusp->add_option("pair", pair_tokens, "Pair preset tokens")->required()->expected(1, -1);
  cusp->add_flag("--fixed-nucleus", fixed, "Treat the nucleus as infinitely heavy");
  cusp->add_option("--ell", ell, "Angular momentum")->default_val(0);
  cusp->add_option("--w0", w0v, "Background potential W0")->default_val(0.0);
  cusp->add_option("--e", e, "Energy E");
  cusp->add_option("--order", order, "Highest series coefficient")->default_val(10);
  add_common(cusp, common);

  auto* local = app.add_subcommand("local", "Sample the local Kummer wave function");
  local->add_option("pair", pair_tokens, "Pair preset tokens")->required()->expected(1, -1);
  local->add_flag("--fixed-nucleus", fixed, "Treat the nucleus as infinitely heavy");
  local->add_option("--ell", ell, "Angular momentum")->default_val(0);
  local->add_option("--m", m, "Magnetic quantum number")->default_val(0);
  local->add_option("--w0", w0v, "Background potential W0")->default_val(0.0);
  local->add_option("--e", e, "Energy E, below W0")->required();
  local->add_option("--u0", u0, "Value of u at the origin")->default_val(1.0);
  local->add_option("--r-min", grid.r_min, "First sample radius")->default_val(0.0);
  local->add_option("--r-max", grid.r_max, "Last sample radius")->default_val(5.0);
  local->add_option("--points", grid.points, "Number of uniform samples")->default_val(101);
  add_common(local, common);

  auto* solve = app.add_subcommand("solve", "Radial eigenvalue problem from a JSON problem file");
  solve->add_option("problem", path, "Problem JSON file")->required();
  solve->add_option("--method", method, "Solver route (default matrix)")->check(CLI::IsMember({"matrix", "shoot", "both"}));
  solve->add_option("--k", k, "Number of levels")->default_val(1);
  solve->add_option("--functions-dir", functions_dir, "Write each eigenfunction as CSV here");
  solve->add_flag("--timing", timing, "Record wall times in the report");
  add_common(solve, common);

  auto* basis = app.add_subcommand("basis", "Cusp-constrained Slater or Gaussian basis");
  basis->add_option("kind", kind_text, "Basis family")->required()->check(CLI::IsMember({"slater", "gaussian"}));
  basis->add_option("pair", pair_tokens, "Pair preset tokens")->required()->expected(1, -1);
  basis->add_flag("--fixed-nucleus", fixed, "Treat the nucleus as infinitely heavy");
  basis->add_option("--ell", ell, "Angular momentum")->default_val(0);
  basis->add_option("--w0", w0v, "Background potential W0")->default_val(0.0);
  basis->add_option("--e", e, "Energy E")->required();
  basis->add_option("--tail", tails, "Comma-separated tail exponents");
  basis->add_option("--coeffs", coeffs, "Comma-separated tail coefficients");
  basis->add_option("--L", L, "Highest tail order")->default_val(2);
  basis->add_option("--g0", g0, "Gaussian head exponent")->default_val(1.0);
  basis->add_option("--cutoff", cutoff, "Cutoff radius of a growing Slater head");
  basis->add_option("--basis-file", basis_file, "Write the interchange basis file here");
  add_common(basis, common);

  auto* envc = app.add_subcommand("env", "Environment potential analysis");
  envc->add_option("environment", path, "Environment JSON file")->required();
  envc->add_option("pair", pair_tokens, "Pair preset tokens")->required()->expected(1, -1);
  envc->add_flag("--fixed-nucleus", fixed, "Treat the nucleus as infinitely heavy");
  envc->add_option("--probes", probes, "Comma-separated probe radii");
  envc->add_option("--lambda-max", lambda_max, "Highest multipole degree")->default_val(10);
  envc->add_option("--theta", theta, "Polar angle of the multipole probe direction")->default_val(0.0);
  envc->add_option("--phi", phi, "Azimuth of the multipole probe direction")->default_val(0.0);
  add_common(envc, common);

  auto* cmp = app.add_subcommand("compare-he", "Kummer local function against an HFR orbital");
  cmp->add_option("hfr", path, "HFR orbital file")->required();
  cmp->add_option("--energy", he.energy, "Energy E")->required();
  cmp->add_option("--energy-kind", energy_kind, "Label for --energy: total or 1s orbital energy")->check(CLI::IsMember({"total", "orbital"}));
  cmp->add_option("--r0", r0_kind, "Reference radius: (l+1)/|a| or the density maximum")->check(CLI::IsMember({"cusp", "density-max"}));
  cmp->add_option("--Z", he.Z, "Nuclear charge")->default_val(2.0);
  cmp->add_option("--A", mass_number, "Mass number (omit for a fixed nucleus)");
  cmp->add_option("--r-max", he.r_max, "Last comparison radius")->default_val(3.0);
  cmp->add_option("--points", he.points, "Number of comparison radii")->default_val(301);
  add_common(cmp, common);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << '\n';
    return 2;
  }

  try {
    if (app.got_subcommand(cusp)) {
      emit(cmd_cusp(parse_pair_preset(pair_tokens, fixed), ell, w0v, e, order), common, out);
    } else if (app.got_subcommand(local)) {
      emit(cmd_local(parse_pair_preset(pair_tokens, fixed), ell, m, w0v, *e, u0, grid), common, out);
    } else if (app.got_subcommand(solve)) {
      const auto res = cmd_solve(read_solve_problem(path), solve_method_from_string(method), k, timing);
      if (res.matrix_seconds > 0.0 || res.shoot_seconds > 0.0) {
        err << fmt::format("timing: matrix {:.6f} s, shoot {:.6f} s\n", res.matrix_seconds,
                           res.shoot_seconds);
      }
      if (!functions_dir.empty()) {
        std::filesystem::create_directories(functions_dir);
        for (const auto& [label, f] : res.functions) {
          std::ofstream os(std::filesystem::path(functions_dir) / (label + ".csv"));
          if (!os) throw DomainError("cannot write into '" + functions_dir + "'");
          write_radial_csv(os, f);
        }
      }
      emit(res.report, common, out);
    } else if (app.got_subcommand(basis)) {
      BasisRequest req;
      req.kind = basis_kind_from_string(kind_text);
      req.ell = ell;
      req.w0 = w0v;
      req.e = *e;
      req.tail_exponents = parse_list(tails);
      req.L = L;
      req.options.g0 = g0;
      req.options.tail_coeffs = parse_list(coeffs);
      req.options.cutoff = cutoff;
      const auto [report, b] = cmd_basis(parse_pair_preset(pair_tokens, fixed), req);
      if (!basis_file.empty()) {
        std::ofstream os(basis_file);
        if (!os) throw DomainError("cannot write '" + basis_file + "'");
        write_basis(os, b);
      }
      emit(report, common, out);
    } else if (app.got_subcommand(envc)) {
      std::ifstream is(path);
      if (!is) throw DomainError("cannot open '" + path + "'");
      const Environment env = read_environment_json(is);
      emit(cmd_env(env, parse_pair_preset(pair_tokens, fixed), parse_list(probes), lambda_max, theta, phi),
           common, out);
    } else if (app.got_subcommand(cmp)) {
      std::ifstream is(path);
      if (!is) throw DomainError("cannot open '" + path + "'");
      const HfrOrbital orb = read_hfr(is);
      he.energy_kind = energy_kind == "orbital" ? EnergyKind::orbital : EnergyKind::total;
      he.r0_kind = r0_kind == "density-max" ? R0Kind::density_max : R0Kind::cusp;
      he.A = mass_number;
      emit(cmd_compare_he(orb, he), common, out);
    }
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  } catch (const NumericalError& ex) {
    err << "error: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace cuspbc::cli
