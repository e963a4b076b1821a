#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cuspbc/cli/commands.hpp"
#include "cuspbc/cli/hfr.hpp"
#include "cuspbc/cli/pair_preset.hpp"
#include "cuspbc/cli/report.hpp"
#include "cuspbc/errors.hpp"

using namespace cuspbc;
using namespace cuspbc::cli;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const std::string kData = CUSPBC_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Report parse_csv(const std::string& text) {
  std::istringstream is(text);
  return read_csv_report(is);
}

double meta_num(const Report& r, const std::string& key) {
  return std::get<double>(r.find_meta(key));
}

double cell_num(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return static_cast<double>(std::get<long long>(c));
}

// Same arguments in both formats must carry identical numbers.
void check_parity(std::vector<std::string> args) {
  auto csv = run_cli(args);
  args.push_back("--format");
  args.push_back("json");
  auto json = run_cli(args);
  REQUIRE(csv.code == 0);
  REQUIRE(json.code == 0);
  std::istringstream js(json.out);
  CHECK(same_content(parse_csv(csv.out), read_json_report(js)));
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "cuspbc_cli_tests";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("pair presets", "[cli]") {
  const auto ee = parse_pair_preset({"e-e", "singlet"});
  CHECK(ee.q1 == -1.0);
  CHECK(ee.q2 == -1.0);
  CHECK(ee.spin_channel == SpinChannel::singlet);
  const auto h = parse_pair_preset({"e-nucleus", "Z=1"});
  CHECK(std::isinf(h.m2));
  const auto p = parse_pair_preset({"e-nucleus", "Z=1", "A=1"});
  CHECK(p.m2 == kProtonMass);
  CHECK(std::isinf(parse_pair_preset({"e-nucleus", "Z=1", "A=1"}, true).m2));
  const auto c = parse_pair_preset({"custom", "q1=1", "q2=-1", "m1=1", "m2=1"});
  CHECK(c.reduced_mass() == 0.5);
  try {
    parse_pair_preset({"e-nucleus", "Z=x"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(parse_pair_preset({"e-e", "quartet"}), ParseError);
  CHECK_THROWS_AS(parse_pair_preset({"proton"}), ParseError);
  CHECK_THROWS_AS(parse_pair_preset({"e-nucleus"}), ParseError);
}

TEST_CASE("cusp subcommand examples", "[cli]") {
  auto r = run_cli({"cusp", "e-e", "singlet", "--ell", "0"});
  REQUIRE(r.code == 0);
  CHECK(meta_num(parse_csv(r.out), "a") == 0.5);

  r = run_cli({"cusp", "e-nucleus", "Z=1", "--fixed-nucleus", "--ell", "0", "--w0", "0", "--e", "-0.5"});
  REQUIRE(r.code == 0);
  const auto rep = parse_csv(r.out);
  CHECK(meta_num(rep, "a") == -1.0);
  CHECK(meta_num(rep, "b") == 0.5);
  CHECK(std::get<std::string>(rep.find_meta("validity_radius")) == "unbounded");
  CHECK(meta_num(rep, "robin_c_psi") == 1.0);
  const auto& coeffs = rep.find_table("coefficients");
  REQUIRE(coeffs.rows.size() == 11);
  // Hydrogen 1s: u = e^{-r}, a_k = (-1)^k / k!.
  double fact = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k > 0) fact *= k;
    CHECK_THAT(cell_num(coeffs.rows[k][1]), WithinRel(std::pow(-1.0, k) / fact, 1e-14));
  }

  r = run_cli({"cusp", "e-nucleus", "Z=1", "A=1", "--ell", "0"});
  REQUIRE(r.code == 0);
  CHECK_THAT(meta_num(parse_csv(r.out), "a"), WithinRel(-kProtonMass / (kProtonMass + 1.0), 1e-15));

  check_parity({"cusp", "e-nucleus", "Z=2", "--ell", "1", "--w0", "0.3", "--e", "-1.1"});
}

TEST_CASE("local subcommand", "[cli]") {
  auto r = run_cli({"local", "e-nucleus", "Z=1", "--e", "-0.5", "--u0", "2", "--r-max", "5",
                    "--points", "51"});
  REQUIRE(r.code == 0);
  const auto rep = parse_csv(r.out);
  const auto& t = rep.find_table("local");
  REQUIRE(t.rows.size() == 51);
  CHECK(cell_num(t.rows[0][1]) == 2.0);
  for (const auto& row : t.rows) {
    const double x = cell_num(row[0]);
    CHECK_THAT(cell_num(row[1]), WithinAbs(2.0 * std::exp(-x), 1e-13));
    CHECK_THAT(cell_num(row[3]), WithinAbs(4.0 * x * x * std::exp(-2 * x), 1e-12));
  }

  r = run_cli({"local", "e-nucleus", "Z=2", "--w0", "0.5", "--e", "-1.5"});
  REQUIRE(r.code == 0);
  CHECK_THAT(meta_num(parse_csv(r.out), "validity_radius"), WithinRel(4.0, 1e-15));

  r = run_cli({"local", "e-nucleus", "Z=1", "--w0", "0", "--e", "0.5"});
  CHECK(r.code == 2);
  check_parity({"local", "e-nucleus", "Z=3", "--ell", "2", "--m", "1", "--w0", "0.2", "--e", "-0.9"});
}

TEST_CASE("solve subcommand", "[cli]") {
  auto r = run_cli({"solve", kData + "/hydrogen_s.json", "--method", "both", "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("timing:") != std::string::npos);
  const auto rep = parse_csv(r.out);
  const auto& t = rep.find_table("levels");
  REQUIRE(t.rows.size() == 6);
  for (const auto& row : t.rows) {
    const int n = static_cast<int>(cell_num(row[1]));
    const bool shoot = std::get<std::string>(row[0]) == "shoot";
    // 3s at r_max = 40 carries the O(1/r^2) remainder of the outer condition.
    const double tol = !shoot ? 1e-6 : n < 3 ? 1e-8 : 1e-7;
    CHECK_THAT(cell_num(row[2]), WithinAbs(-0.5 / (n * n), tol));
    CHECK_THAT(cell_num(row[3]), WithinAbs(cell_num(row[4]), 1e-6));
  }

  r = run_cli({"solve", kData + "/hydrogen_p.json", "--method", "shoot"});
  REQUIRE(r.code == 0);
  CHECK_THAT(cell_num(parse_csv(r.out).find_table("levels").rows[0][2]), WithinAbs(-0.125, 1e-8));

  const auto dir = temp_dir() / "functions";
  std::filesystem::remove_all(dir);
  r = run_cli({"solve", kData + "/hydrogen_p.json", "--functions-dir", dir.string()});
  REQUIRE(r.code == 0);
  std::ifstream f(dir / "matrix_1.csv");
  const auto rf = read_radial_csv(f);
  CHECK(rf.ell == 1);
  CHECK(rf.size() == 2000);

  check_parity({"solve", kData + "/hydrogen_s.json", "--k", "2"});
}

TEST_CASE("solve problem files", "[cli]") {
  const auto setup = parse_solve_problem(R"({"ell": 2, "pair_product": -2, "grid": {"points": 500}})");
  CHECK(setup.problem.ell == 2);
  CHECK(setup.problem.grid.size() == 500);
  CHECK_THAT(setup.inner.log_derivative(), WithinRel(-2.0 / 3.0, 1e-15));
  CHECK(std::holds_alternative<AsymptoticBoundary>(setup.outer));
  const auto robin = parse_solve_problem(
      R"({"ell": 0, "pair_product": -1, "grid": {}, "outer": {"c_dpsi": 1, "c_psi": 1}})");
  CHECK(std::get<RobinBoundary>(robin.outer).log_derivative() == -1.0);
  try {
    parse_solve_problem("{\n  \"ell\": 0,\n  \"grid\" {}\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_solve_problem(R"({"ell": 0, "grid": {}})"), ParseError);

  // Extra potential tables resolve relative to the problem file.
  const auto dir = temp_dir();
  {
    std::ofstream tab(dir / "flat.dat");
    tab << "# r V\n1e-6 0.25\n100 0.25\n";
    std::ofstream js(dir / "flat.json");
    js << R"({"ell": 0, "pair_product": -1, "grid": {}, "extra_potential": "flat.dat",
              "outer": {"c_dpsi": 1, "c_psi": 1}})";
  }
  const auto flat = read_solve_problem((dir / "flat.json").string());
  REQUIRE(flat.problem.extra_potential.has_value());
  const auto out = cmd_solve(flat, SolveMethod::matrix, 1);
  CHECK_THAT(cell_num(out.report.find_table("levels").rows[0][2]), WithinAbs(-0.25, 1e-8));
}

TEST_CASE("basis subcommand examples", "[cli]") {
  const auto file = temp_dir() / "h.basis";
  auto r = run_cli({"basis", "slater", "e-nucleus", "Z=1", "--e", "-0.5", "--tail", "1.5,2.5",
                    "--L", "4", "--basis-file", file.string()});
  REQUIRE(r.code == 0);
  auto rep = parse_csv(r.out);
  CHECK(meta_num(rep, "a_est") == -1.0);
  CHECK(meta_num(rep, "b_est") == 0.5);
  CHECK_THAT(meta_num(rep, "a_est_sampled"), WithinAbs(-1.0, 1e-7));
  std::ifstream bf(file);
  const auto basis = read_basis(bf);
  CHECK(basis.slater_tail.size() == 2);

  r = run_cli({"basis", "gaussian", "e-nucleus", "Z=2", "--ell", "1", "--e", "-0.5", "--g0", "0.8",
               "--tail", "1.1", "--L", "5"});
  REQUIRE(r.code == 0);
  rep = parse_csv(r.out);
  CHECK_THAT(meta_num(rep, "a_est"), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(meta_num(rep, "b_est"), WithinAbs(meta_num(rep, "b"), 1e-14));

  r = run_cli({"basis", "slater", "e-e", "singlet", "--e", "0.1", "--w0", "0.5"});
  REQUIRE(r.code == 0);
  rep = parse_csv(r.out);
  CHECK(meta_num(rep, "a_est") == 0.5);
  CHECK(meta_num(rep, "cutoff") == 2.0);

  r = run_cli({"basis", "slater", "e-nucleus", "Z=1", "--e", "-0.5", "--tail", "1", "--L", "6",
               "--coeffs", "1,2"});
  CHECK(r.code == 2);
  check_parity({"basis", "gaussian", "e-nucleus", "Z=1", "--e", "-0.5", "--tail", "2", "--L", "3"});
}

TEST_CASE("env subcommand", "[cli]") {
  const auto dir = temp_dir();
  {
    std::ofstream js(dir / "single.json");
    js << R"({"charges": [{"q": 2.0, "r": 1.5, "theta": 0.3, "phi": 1.0}]})";
  }
  auto r = run_cli({"env", (dir / "single.json").string(), "e-nucleus", "Z=1"});
  REQUIRE(r.code == 0);
  auto rep = parse_csv(r.out);
  // (q1 + q2) q / r with q1 + q2 = 0 for hydrogen-like Z=1.
  CHECK(meta_num(rep, "w0") == 0.0);
  r = run_cli({"env", (dir / "single.json").string(), "e-e"});
  REQUIRE(r.code == 0);
  rep = parse_csv(r.out);
  CHECK_THAT(meta_num(rep, "w0"), WithinRel(-2.0 * 2.0 / 1.5, 1e-15));

  r = run_cli({"env", kData + "/environment_water_like.json", "e-e", "singlet", "--lambda-max",
               "15"});
  REQUIRE(r.code == 0);
  rep = parse_csv(r.out);
  CHECK(std::get<std::string>(rep.find_meta("odd_terms_vanish")) == "yes");
  for (const auto& row : rep.find_table("multipole").rows) {
    if (static_cast<int>(cell_num(row[0])) % 2 == 1) {
      CHECK(cell_num(row[1]) == 0.0);
      CHECK(cell_num(row[2]) == 0.0);
    }
  }
  for (const auto& row : rep.find_table("average").rows) CHECK(cell_num(row[2]) < 1e-10);

  {
    std::ofstream js(dir / "bad.json");
    js << "{\"charges\": [\n  {\"q\": 1, \"r\": }\n]}";
  }
  r = run_cli({"env", (dir / "bad.json").string(), "e-e"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  check_parity({"env", kData + "/environment_water_like.json", "e-nucleus", "Z=1", "A=1"});
}

TEST_CASE("HFR orbitals", "[cli]") {
  for (double zeta : {0.7, 1.0, 1.6875, 3.2}) {
    HfrOrbital o{{{1, zeta, 1.0}}};
    CHECK_THAT(o.norm(), WithinRel(1.0, 1e-14));
    CHECK_THAT(o.mean_inverse_r(), WithinRel(zeta, 1e-12));
    CHECK_THAT(o.density_maximum(), WithinRel(1.0 / zeta, 1e-7));
    CHECK_THAT(o(0.0), WithinRel(2.0 * std::pow(zeta, 1.5), 1e-15));
  }
  // 2s: <1/r> = zeta / 2.
  HfrOrbital two{{{2, 1.3, 1.0}}};
  CHECK_THAT(two.mean_inverse_r(), WithinRel(0.65, 1e-12));
  std::istringstream ok("# He\n1 1.4 0.8\n\n2 2.0 0.2\n");
  const auto o = read_hfr(ok);
  REQUIRE(o.terms.size() == 2);
  CHECK(o.terms[1].n == 2);
  std::istringstream bad("1 1.0 1.0\n1 -2 1\n");
  try {
    read_hfr(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(read_hfr(empty), ParseError);
}

TEST_CASE("compare-he subcommand", "[cli]") {
  // Exact hydrogen orbital with Z = 1: W0 = 0, and the Kummer function is
  // the orbital itself.
  auto r = run_cli({"compare-he", kData + "/hydrogen_1s.hfr", "--Z", "1", "--energy", "-0.5"});
  REQUIRE(r.code == 0);
  auto rep = parse_csv(r.out);
  CHECK(meta_num(rep, "w0") == 0.0);
  CHECK_THAT(meta_num(rep, "u0"), WithinRel(2.0, 1e-12));
  CHECK(meta_num(rep, "rel_error_r0") < 1e-10);
  CHECK(meta_num(rep, "rel_error_half_r0") < 1e-10);
  CHECK(std::get<std::string>(rep.find_meta("energy_kind")) == "total");

  const auto dir = temp_dir();
  const std::vector<std::string> args{"compare-he", kData + "/hydrogen_1s.hfr", "--energy", "-0.9",
                                      "--energy-kind", "orbital", "--r0", "density-max"};
  auto a = args, b = args;
  a.insert(a.end(), {"-o", (dir / "a.csv").string()});
  b.insert(b.end(), {"-o", (dir / "b.csv").string()});
  REQUIRE(run_cli(a).code == 0);
  REQUIRE(run_cli(b).code == 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), {});
  };
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(!slurp(dir / "a.csv").empty());

  r = run_cli({"compare-he", kData + "/hydrogen_1s.hfr", "--energy", "2.0"});
  CHECK(r.code == 2);
  check_parity(args);
}

TEST_CASE("exit codes and tolerance override", "[cli]") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"cusp"}).code == 2);
  CHECK(run_cli({"solve", "/nonexistent/problem.json"}).code == 2);
  // More levels than the grid can hold is a numerical failure.
  CHECK(run_cli({"solve", kData + "/hydrogen_s.json", "--k", "40"}).code == 3);
  CHECK(run_cli({"--help"}).code == 0);

  ::setenv("CUSPBC_TOL", "-1", 1);
  CHECK(run_cli({"solve", kData + "/hydrogen_s.json"}).code == 2);
  ::setenv("CUSPBC_TOL", "1e-6", 1);
  const auto loose = run_cli({"solve", kData + "/hydrogen_s.json"});
  ::unsetenv("CUSPBC_TOL");
  REQUIRE(loose.code == 0);
  CHECK_THAT(cell_num(parse_csv(loose.out).find_table("levels").rows[0][2]), WithinAbs(-0.5, 2e-6));
}

TEST_CASE("executable", "[cli]") {
  const std::string exe = CUSPBC_EXE;
  const auto out = temp_dir() / "exe.csv";
  const std::string ok = exe + " cusp e-e singlet --ell 0 -o " + out.string();
  CHECK(std::system(ok.c_str()) == 0);
  std::ifstream is(out);
  const auto rep = read_csv_report(is);
  CHECK(meta_num(rep, "a") == 0.5);
  const std::string bad = exe + " cusp e-e singlet --ell 1 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
