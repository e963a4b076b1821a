#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cuspbc/basis.hpp"
#include "cuspbc/cli/hfr.hpp"
#include "cuspbc/cli/report.hpp"
#include "cuspbc/coalescence.hpp"
#include "cuspbc/environment.hpp"
#include "cuspbc/radial_solver.hpp"

namespace cuspbc::cli {

/// Tolerance from CUSPBC_TOL, or fallback when unset. DomainError on a
/// non-positive or unparsable value.
double tolerance_override(double fallback);

Report cmd_cusp(const CoalescencePair& pair, int ell, double w0, std::optional<double> e,
                int order);

struct LocalGrid {
  double r_min = 0.0;
  double r_max = 5.0;
  int points = 101;
};

Report cmd_local(const CoalescencePair& pair, int ell, int m, double w0, double e, double u0,
                 const LocalGrid& grid);

/// Radial problem read from JSON:
/// {"ell": 0, "mass": 1, "pair_product": -1, "w0": 0,
///  "grid": {"r_min": 1e-5, "r_max": 40, "points": 2000},
///  "extra_potential": "table.dat", "inner_a": -1,
///  "outer": "asymptotic" | {"c_dpsi": 1, "c_psi": 1}, "asymptotic_charge": 0}
/// Only ell, pair_product and grid are required; extra_potential paths are
/// relative to base_dir.
struct SolveSetup {
  RadialProblem problem;
  RobinBoundary inner;
  OuterBoundary outer;
};

SolveSetup parse_solve_problem(const std::string& text, const std::string& base_dir = ".");
SolveSetup read_solve_problem(const std::string& path);

enum class SolveMethod { matrix, shoot, both };

SolveMethod solve_method_from_string(const std::string& s);

struct SolveOutput {
  Report report;
  std::vector<std::pair<std::string, RadialFunction>> functions;  // (label, R)
  double matrix_seconds = 0.0;
  double shoot_seconds = 0.0;
};

SolveOutput cmd_solve(const SolveSetup& setup, SolveMethod method, int k, bool timing_in_report = false);

struct BasisRequest {
  BasisKind kind = BasisKind::slater;
  int ell = 0;
  double w0 = 0.0;
  double e = -0.5;
  std::vector<double> tail_exponents;
  int L = 2;
  BasisOptions options;
};

/// Report plus the generated basis.
std::pair<Report, CuspBasis> cmd_basis(const CoalescencePair& pair, const BasisRequest& req);

Report cmd_env(const Environment& env, const CoalescencePair& pair, std::vector<double> probes,
               int lambda_max, double theta = 0.0, double phi = 0.0);

enum class EnergyKind { total, orbital };
enum class R0Kind { cusp, density_max };

struct CompareHeOptions {
  double energy = 0.0;
  EnergyKind energy_kind = EnergyKind::total;
  R0Kind r0_kind = R0Kind::cusp;
  double Z = 2.0;
  std::optional<int> A;
  double r_max = 3.0;
  int points = 301;
};

Report cmd_compare_he(const HfrOrbital& orbital, const CompareHeOptions& opt);

/// Full command line (args[0] is the subcommand). Writes the report to out
/// (or -o file) and diagnostics to err; returns the process exit code:
/// 0 success, 2 input or parse error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cuspbc::cli
