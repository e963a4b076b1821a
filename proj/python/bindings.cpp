#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuspbc/basis.hpp"
#include "cuspbc/cli/commands.hpp"
#include "cuspbc/coalescence.hpp"
#include "cuspbc/cusp.hpp"
#include "cuspbc/cusp_limits.hpp"
#include "cuspbc/environment.hpp"
#include "cuspbc/errors.hpp"
#include "cuspbc/radial_solver.hpp"
#include "cuspbc/special_functions.hpp"

namespace py = pybind11;
using namespace cuspbc;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

// Eigenpairs go to Python as (energy, r, R) tuples.
py::tuple eigenpair_tuple(const Eigenpair& e) {
  return py::make_tuple(e.energy, to_array(e.f.grid), to_array(e.f.values));
}

OuterBoundary outer_from(const py::object& outer) {
  if (outer.is_none()) return AsymptoticBoundary{};
  if (py::isinstance<RobinBoundary>(outer)) return outer.cast<RobinBoundary>();
  return outer.cast<AsymptoticBoundary>();
}

}  // namespace

PYBIND11_MODULE(_cuspbc, m) {
  m.doc() = "Coalescence cusp conditions, local wave functions, cusp bases and a radial solver.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", input.ptr());
  py::register_exception<ParityError>(m, "ParityError", input.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", input.ptr());
  py::register_exception<ParseError>(m, "ParseError", input.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());
  py::register_exception<FitError>(m, "FitError", numerical.ptr());

  py::enum_<SpinChannel>(m, "SpinChannel")
      .value("singlet", SpinChannel::singlet)
      .value("triplet", SpinChannel::triplet);

  py::class_<CoalescencePair>(m, "CoalescencePair")
      .def(py::init([](double q1, double q2, double m1, double m2,
                       std::optional<SpinChannel> spin) {
             CoalescencePair p{q1, q2, m1, m2, spin};
             p.validate();
             return p;
           }),
           py::arg("q1"), py::arg("q2"), py::arg("m1"), py::arg("m2"),
           py::arg("spin_channel") = py::none())
      .def_readwrite("q1", &CoalescencePair::q1)
      .def_readwrite("q2", &CoalescencePair::q2)
      .def_readwrite("m1", &CoalescencePair::m1)
      .def_readwrite("m2", &CoalescencePair::m2)
      .def_readwrite("spin_channel", &CoalescencePair::spin_channel)
      .def_property_readonly("reduced_mass", &CoalescencePair::reduced_mass)
      .def_property_readonly("alpha", &CoalescencePair::alpha);

  m.def("electron_nucleus", &electron_nucleus, py::arg("Z"), py::arg("A") = py::none());
  m.def("electron_electron", &electron_electron, py::arg("channel") = py::none());

  m.def("kummer_1f1", [](double a, double b, double x) { return kummer_1f1(a, b, x); },
        py::arg("a"), py::arg("b"), py::arg("x"));

  m.def("cusp_a", &cusp_a, py::arg("pair"), py::arg("ell"));
  m.def("cusp_b", &cusp_b, py::arg("pair"), py::arg("ell"), py::arg("w0"), py::arg("e"));
  m.def(
      "cusp_series",
      [](const CoalescencePair& pair, int ell, double w0, double e, int order) {
        return cusp_series(pair, ell, w0, e, order).coeffs;
      },
      py::arg("pair"), py::arg("ell"), py::arg("w0"), py::arg("e"), py::arg("order"));
  m.def("validity_radius", &validity_radius, py::arg("pair"), py::arg("w0"));

  py::class_<LocalWavefunction>(m, "LocalWavefunction")
      .def_readonly("ell", &LocalWavefunction::ell)
      .def_readonly("m", &LocalWavefunction::m)
      .def_readonly("u0", &LocalWavefunction::u0)
      .def_readonly("alpha", &LocalWavefunction::alpha)
      .def_readonly("beta", &LocalWavefunction::beta)
      .def("u", [](const LocalWavefunction& lw, double r) { return local_u(lw, r); })
      .def("u", [](const LocalWavefunction& lw, py::array_t<double, py::array::forcecast> r) {
        py::array_t<double> out(r.request().shape);
        const double* src = r.data();
        double* dst = out.mutable_data();
        for (py::ssize_t i = 0; i < r.size(); ++i) dst[i] = local_u(lw, src[i]);
        return out;
      });
  m.def("make_local_wavefunction", &make_local_wavefunction, py::arg("pair"), py::arg("ell"),
        py::arg("m"), py::arg("w0"), py::arg("e"), py::arg("u0") = 1.0);

  py::class_<PointCharge>(m, "PointCharge")
      .def(py::init<double, double, double, double>(), py::arg("q"), py::arg("r"),
           py::arg("theta"), py::arg("phi"))
      .def_readwrite("q", &PointCharge::q)
      .def_readwrite("r", &PointCharge::r)
      .def_readwrite("theta", &PointCharge::theta)
      .def_readwrite("phi", &PointCharge::phi);
  py::class_<Environment>(m, "Environment")
      .def(py::init([](std::vector<PointCharge> charges) {
             Environment env{std::move(charges)};
             env.validate();
             return env;
           }),
           py::arg("charges"))
      .def_readonly("charges", &Environment::charges)
      .def_property_readonly("convergence_radius", &Environment::convergence_radius);
  m.def("w0", &w0, py::arg("env"), py::arg("pair"));
  m.def("w_exact", &w_exact, py::arg("env"), py::arg("pair"), py::arg("r"), py::arg("theta"),
        py::arg("phi"));
  m.def("w_multipole", &w_multipole, py::arg("env"), py::arg("pair"), py::arg("r"),
        py::arg("theta"), py::arg("phi"), py::arg("lambda_max"));
  m.def("spherical_average_w", &spherical_average_w, py::arg("env"), py::arg("pair"),
        py::arg("r"), py::arg("n_theta") = 64, py::arg("n_phi") = 128);

  py::class_<SystemAsymptotics>(m, "SystemAsymptotics")
      .def(py::init<double, double, double>(), py::arg("total_reduced_mass"),
           py::arg("total_charge"), py::arg("energy"))
      .def("decay", &SystemAsymptotics::decay)
      .def("power", &SystemAsymptotics::power)
      .def("kappa", &SystemAsymptotics::kappa, py::arg("r"));
  py::class_<RobinBoundary>(m, "RobinBoundary")
      .def_readonly("c_dpsi", &RobinBoundary::c_dpsi)
      .def_readonly("c_psi", &RobinBoundary::c_psi)
      .def("log_derivative", &RobinBoundary::log_derivative);
  py::class_<AsymptoticBoundary>(m, "AsymptoticBoundary")
      .def(py::init([](std::optional<double> q) { return AsymptoticBoundary{q}; }),
           py::arg("charge_plus_one") = py::none());
  m.def("robin_inner", &robin_inner, py::arg("ell"), py::arg("a"));
  m.def("robin_outer", &robin_outer, py::arg("sys"), py::arg("r_max"));
  m.def("log_grid", &log_grid, py::arg("r_min") = 1e-5, py::arg("r_max") = 40.0,
        py::arg("points") = 2000);

  py::class_<RadialProblem>(m, "RadialProblem")
      .def(py::init([](int ell, double mass, double pair_product, double w0,
                       std::vector<double> grid, std::optional<std::vector<double>> extra) {
             RadialProblem p;
             p.ell = ell;
             p.mass = mass;
             p.pair_product = pair_product;
             p.w0 = w0;
             p.grid = grid.empty() ? log_grid() : std::move(grid);
             p.extra_potential = std::move(extra);
             p.validate();
             return p;
           }),
           py::arg("ell"), py::arg("mass") = 1.0, py::arg("pair_product") = -1.0,
           py::arg("w0") = 0.0, py::arg("grid") = std::vector<double>{},
           py::arg("extra_potential") = py::none())
      .def_readonly("ell", &RadialProblem::ell)
      .def_readonly("grid", &RadialProblem::grid);

  m.def(
      "solve_matrix",
      [](const RadialProblem& p, const RobinBoundary& inner, const py::object& outer, int k) {
        py::list out;
        for (const auto& e : solve_matrix(p, inner, outer_from(outer), k)) out.append(eigenpair_tuple(e));
        return out;
      },
      py::arg("problem"), py::arg("inner"), py::arg("outer") = py::none(), py::arg("k") = 1);
  m.def(
      "solve_shooting",
      [](const RadialProblem& p, const RobinBoundary& inner, const py::object& outer,
         std::pair<double, double> bracket) {
        return eigenpair_tuple(solve_shooting(p, inner, outer_from(outer), bracket));
      },
      py::arg("problem"), py::arg("inner"), py::arg("outer"), py::arg("bracket"));

  py::enum_<BasisKind>(m, "BasisKind")
      .value("slater", BasisKind::slater)
      .value("gaussian", BasisKind::gaussian);
  py::class_<CuspBasis>(m, "CuspBasis")
      .def_readonly("kind", &CuspBasis::kind)
      .def_readonly("ell", &CuspBasis::ell)
      .def_readonly("a", &CuspBasis::a)
      .def_readonly("b", &CuspBasis::b)
      .def_readonly("cutoff", &CuspBasis::cutoff)
      .def("evaluate", &CuspBasis::evaluate, py::arg("r"))
      .def("to_text", [](const CuspBasis& b) {
        std::ostringstream os;
        write_basis(os, b);
        return os.str();
      });
  m.def(
      "build_basis",
      [](BasisKind kind, int ell, double a, double b, const std::vector<double>& tail_exponents,
         int L, double g0) {
        BasisOptions opt;
        opt.g0 = g0;
        return build_basis(kind, ell, a, b, tail_exponents, L, opt);
      },
      py::arg("kind"), py::arg("ell"), py::arg("a"), py::arg("b"),
      py::arg("tail_exponents") = std::vector<double>{}, py::arg("L") = 2, py::arg("g0") = 1.0);
  m.def(
      "verify_cusp_orders",
      [](const CuspBasis& b) {
        const auto o = verify_cusp_orders(b);
        return py::make_tuple(o.a_est, o.b_est);
      },
      py::arg("basis"));

  m.def(
      "cusp_limits",
      [](std::vector<double> r, std::vector<double> values, int ell) {
        RadialFunction f;
        f.grid = std::move(r);
        f.values = std::move(values);
        f.ell = ell;
        return py::make_tuple(cusp_limit_first(f, ell), cusp_limit_second(f, ell));
      },
      py::arg("r"), py::arg("values"), py::arg("ell"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "Runs a cuspbc subcommand in process; returns (exit_code, stdout, stderr).");
}
