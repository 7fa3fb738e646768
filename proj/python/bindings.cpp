#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ptdyn/diagnostics.hpp"
#include "ptdyn/experiments.hpp"

namespace py = pybind11;
using namespace ptdyn;

namespace {

LowRankInit make_init(Matrix phi0, RealVector occupations) {
  LowRankInit init;
  init.rank = static_cast<int>(phi0.cols());
  init.phi0 = std::move(phi0);
  init.occupations = std::move(occupations);
  init.n_electrons = init.occupations.sum();
  init.energies = RealVector::Zero(init.rank);
  return init;
}

}  // namespace

PYBIND11_MODULE(_ptdyn, m) {
  m.doc() = "low-rank mixed-state propagation under parallel-transport and "
            "Schroedinger gauges with implicit-midpoint integrators";

  py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<ConfigError>(m, "ConfigurationError");

  py::enum_<ModelKind>(m, "ModelKind")
      .value("LinearDrivenLattice", ModelKind::LinearDrivenLattice)
      .value("NonlinearYukawa", ModelKind::NonlinearYukawa);
  py::enum_<LaplacianScheme>(m, "LaplacianScheme")
      .value("Spectral", LaplacianScheme::Spectral)
      .value("FiniteDifference2", LaplacianScheme::FiniteDifference2);
  py::enum_<StaticPotential>(m, "StaticPotential")
      .value("Cosine", StaticPotential::Cosine)
      .value("Harmonic", StaticPotential::Harmonic);
  py::enum_<Scheme>(m, "Scheme")
      .value("PTIM", Scheme::PTIM)
      .value("SDIM", Scheme::SDIM)
      .value("RK4Dense", Scheme::RK4Dense);
  py::enum_<NormKind>(m, "NormKind")
      .value("Spectral", NormKind::Spectral)
      .value("Frobenius", NormKind::Frobenius);
  py::enum_<Quantity>(m, "Quantity")
      .value("Phi", Quantity::Phi)
      .value("Sigma", Quantity::Sigma)
      .value("Psi", Quantity::Psi)
      .value("Rho", Quantity::Rho);

  py::class_<Grid1D>(m, "Grid1D")
      .def_readonly("cells", &Grid1D::cells)
      .def_readonly("points_per_cell", &Grid1D::points_per_cell)
      .def_readonly("n_points", &Grid1D::n_points)
      .def_readonly("coords", &Grid1D::coords)
      .def_readonly("dx", &Grid1D::dx);
  m.def("build_grid", &build_grid, py::arg("cells"), py::arg("points_per_cell"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("kind", &ModelParams::kind)
      .def_readwrite("drive_amplitude", &ModelParams::drive_amplitude)
      .def_readwrite("drive_frequency", &ModelParams::drive_frequency)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def_readwrite("eps0", &ModelParams::eps0)
      .def_readwrite("laplacian", &ModelParams::laplacian)
      .def_readwrite("potential", &ModelParams::potential);

  py::class_<HamiltonianModel>(m, "HamiltonianModel")
      .def("dimension", &HamiltonianModel::dimension)
      .def("density_dependent", &HamiltonianModel::density_dependent)
      .def("assemble",
           py::overload_cast<double>(&HamiltonianModel::assemble, py::const_),
           py::arg("t"))
      .def("assemble",
           py::overload_cast<double, const Matrix&>(&HamiltonianModel::assemble,
                                                    py::const_),
           py::arg("t"), py::arg("rho"))
      .def("exchange_matrix", &HamiltonianModel::exchange_matrix, py::arg("rho"));

  py::class_<LatticeHamiltonian, HamiltonianModel>(m, "LatticeHamiltonian")
      .def(py::init<Grid1D, ModelParams>(), py::arg("grid"), py::arg("params"))
      .def_property_readonly("grid", &LatticeHamiltonian::grid)
      .def_property_readonly("kinetic", &LatticeHamiltonian::kinetic);
  m.def("kinetic_matrix", &kinetic_matrix, py::arg("grid"),
        py::arg("scheme") = LaplacianScheme::Spectral);

  py::class_<LowRankInit>(m, "LowRankInit")
      .def(py::init(&make_init), py::arg("phi0"), py::arg("occupations"))
      .def_readonly("phi0", &LowRankInit::phi0)
      .def_readonly("occupations", &LowRankInit::occupations)
      .def_readonly("mu", &LowRankInit::mu)
      .def_readonly("beta", &LowRankInit::beta)
      .def_readonly("n_electrons", &LowRankInit::n_electrons)
      .def_readonly("rank", &LowRankInit::rank)
      .def_readonly("energies", &LowRankInit::energies)
      .def("sigma0", &LowRankInit::sigma0);

  m.def(
      "fermi_dirac_init",
      [](const HamiltonianModel& model, double beta, std::optional<double> ne,
         std::optional<double> mu, int rank) {
        if (ne.has_value() == mu.has_value())
          throw std::invalid_argument("pass exactly one of ne / mu");
        const OccupationTarget target = ne ? OccupationTarget::electron_count(*ne)
                                           : OccupationTarget::chemical_potential(*mu);
        return fermi_dirac_init(model, beta, target, rank);
      },
      py::arg("model"), py::arg("beta"), py::arg("ne") = std::nullopt,
      py::arg("mu") = std::nullopt, py::arg("rank"));

  m.def("dense_density", &dense_density, py::arg("phi"), py::arg("sigma"));

  m.def(
      "rhs_von_neumann",
      [](const HamiltonianModel& model, double t, const Matrix& rho) {
        return rhs_von_neumann(model, t, rho);
      },
      py::arg("model"), py::arg("t"), py::arg("rho"));
  m.def(
      "rhs_pt",
      [](const HamiltonianModel& model, double t, const Matrix& phi,
         const Matrix& sigma) {
        const PTDerivative d = rhs_pt(model, PTState{t, phi, sigma});
        return py::make_tuple(d.dphi, d.dsigma);
      },
      py::arg("model"), py::arg("t"), py::arg("phi"), py::arg("sigma"));
  m.def(
      "rhs_sd",
      [](const HamiltonianModel& model, double t, const Matrix& psi,
         const RealVector& occ0) { return rhs_sd(model, SDState{t, psi, occ0}); },
      py::arg("model"), py::arg("t"), py::arg("psi"), py::arg("occ0"));
  m.def(
      "rhs_gauge",
      [](const HamiltonianModel& model, double t, const Matrix& phi,
         const Matrix& sigma, const Matrix& gauge) {
        const PTDerivative d = rhs_gauge(model, t, phi, sigma, gauge);
        return py::make_tuple(d.dphi, d.dsigma);
      },
      py::arg("model"), py::arg("t"), py::arg("phi"), py::arg("sigma"),
      py::arg("gauge"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("mixing_depth", &SolverConfig::mixing_depth)
      .def_readwrite("damping", &SolverConfig::damping)
      .def_readwrite("tol", &SolverConfig::tol)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("regularization", &SolverConfig::regularization)
      .def_readwrite("orthonormalize", &SolverConfig::orthonormalize);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("converged", &SolveReport::converged);

  m.def(
      "anderson_solve",
      [](const std::function<RealVector(const RealVector&)>& map, RealVector x0,
         const SolverConfig& cfg) {
        SolveReport report;
        RealVector x = anderson_solve(map, std::move(x0), cfg, &report);
        return py::make_tuple(x, report);
      },
      py::arg("map"), py::arg("x0"), py::arg("config") = SolverConfig());

  py::class_<StepReport>(m, "StepReport")
      .def_readonly("iterations", &StepReport::iterations)
      .def_readonly("residual", &StepReport::residual)
      .def_readonly("ortho_defect", &StepReport::ortho_defect)
      .def_readonly("wall_time", &StepReport::wall_time)
      .def_readonly("converged", &StepReport::converged);

  m.def(
      "pt_im_step",
      [](const HamiltonianModel& model, double t, const Matrix& phi,
         const Matrix& sigma, double h, const SolverConfig& cfg) {
        auto [next, report] = pt_im_step(model, PTState{t, phi, sigma}, h, cfg);
        return py::make_tuple(next.phi, next.sigma, report);
      },
      py::arg("model"), py::arg("t"), py::arg("phi"), py::arg("sigma"), py::arg("h"),
      py::arg("config") = SolverConfig());
  m.def(
      "sd_im_step",
      [](const HamiltonianModel& model, double t, const Matrix& psi,
         const RealVector& occ0, double h, const SolverConfig& cfg) {
        auto [next, report] = sd_im_step(model, SDState{t, psi, occ0}, h, cfg);
        return py::make_tuple(next.psi, report);
      },
      py::arg("model"), py::arg("t"), py::arg("psi"), py::arg("occ0"), py::arg("h"),
      py::arg("config") = SolverConfig());
  m.def(
      "rk4_dense_step",
      [](const HamiltonianModel& model, double t, const Matrix& rho, double h) {
        return rk4_dense_step(model, t, rho, h);
      },
      py::arg("model"), py::arg("t"), py::arg("rho"), py::arg("h"));

  py::class_<StateSample>(m, "StateSample")
      .def_readonly("t", &StateSample::t)
      .def_readonly("orbitals", &StateSample::orbitals)
      .def_readonly("occupation", &StateSample::occupation)
      .def_readonly("density", &StateSample::density)
      .def("dense", &StateSample::dense, py::arg("scheme"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("scheme", &Trajectory::scheme)
      .def_readonly("n_grid", &Trajectory::n_grid)
      .def_readonly("rank", &Trajectory::rank)
      .def_readonly("step_size", &Trajectory::step_size)
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("reports", &Trajectory::reports);

  m.def("propagate", &propagate, py::arg("model"), py::arg("init"), py::arg("scheme"),
        py::arg("h"), py::arg("t_final"), py::arg("sample_every") = 1,
        py::arg("config") = SolverConfig(),
        py::call_guard<py::gil_scoped_release>());

  m.def("save_trajectory", &save_trajectory, py::arg("trajectory"), py::arg("path"));
  m.def("load_trajectory", &load_trajectory, py::arg("path"));

  m.def("relative_error", &relative_error, py::arg("numeric"), py::arg("reference"),
        py::arg("quantity"), py::arg("norm") = NormKind::Frobenius);
  m.def("dipole_moment",
        py::overload_cast<const Grid1D&, const Matrix&, const Matrix&>(&dipole_moment),
        py::arg("grid"), py::arg("phi"), py::arg("sigma"));
  m.def("dipole_moment", py::overload_cast<const Grid1D&, const Matrix&>(&dipole_moment),
        py::arg("grid"), py::arg("rho"));

  py::class_<ConservationSeries>(m, "ConservationSeries")
      .def_readonly("t", &ConservationSeries::t)
      .def_readonly("ortho_defect", &ConservationSeries::ortho_defect)
      .def_readonly("tr_sigma", &ConservationSeries::tr_sigma)
      .def_readonly("tr_sigma2", &ConservationSeries::tr_sigma2)
      .def_readonly("tr_sigma3", &ConservationSeries::tr_sigma3);
  m.def("conservation_report", &conservation_report, py::arg("trajectory"));

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("h", &BoundReport::h)
      .def("projector_aggregate_h2", &BoundReport::projector_aggregate_h2)
      .def("density_aggregate_h2", &BoundReport::density_aggregate_h2)
      .def("h3psi_h2", &BoundReport::h3psi_h2);
  m.def("commutator_bounds", &commutator_bounds, py::arg("model"),
        py::arg("trajectory"), py::arg("h"));

  m.def("convergence_order", &convergence_order, py::arg("step_sizes"),
        py::arg("errors"));

  py::class_<TwoLevelScan>(m, "TwoLevelScan")
      .def_readonly("eps", &TwoLevelScan::eps)
      .def_readonly("pt_aggregate", &TwoLevelScan::pt_aggregate)
      .def_readonly("sd_aggregate", &TwoLevelScan::sd_aggregate)
      .def_readonly("pt_exponent", &TwoLevelScan::pt_exponent)
      .def_readonly("sd_exponent", &TwoLevelScan::sd_exponent);
  m.def("two_level_adiabatic_scan", &two_level_adiabatic_scan, py::arg("eps_values"),
        py::arg("scale") = 8.0, py::arg("delta") = 1.0, py::arg("t_final") = 1.0);
}
