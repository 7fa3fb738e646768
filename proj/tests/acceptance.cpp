// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the binary exits nonzero if any criterion fails. Fine references are
// cached under --cache so reruns are fast.

#include <cstring>
#include <iostream>
#include <sstream>
#include <vector>

#include "ptdyn/experiments.hpp"
#include "support.hpp"

using namespace ptdyn;

namespace {

struct Criterion {
  int id;
  std::string label;
  bool passed = false;
  std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& label, bool passed, const std::string& detail) {
  g_results.push_back({id, label, passed, detail});
  std::cout << (passed ? "PASS" : "FAIL") << " criterion " << id << " (" << label
            << "): " << detail << "\n"
            << std::flush;
}

ExperimentConfig driven_lattice_config() {
  ExperimentConfig cfg;
  cfg.cells = 4;
  cfg.points_per_cell = 64;
  cfg.beta = 1.453;
  cfg.model.kind = ModelKind::LinearDrivenLattice;
  return cfg;
}

SolverConfig robust_solver() {
  // wide window and light damping: converges the implicit midpoint solve for
  // every step size used below, including h = 0.05 where h ||H|| / 2 >> 1
  SolverConfig s;
  s.mixing_depth = 30;
  s.damping = 0.1;
  s.tol = 1e-10;
  s.max_iterations = 600;
  return s;
}

// ---------------------------------------------------------------------------

void criterion_conservation(const RunOptions& opt) {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.ne = 20.0;
  cfg.rank = 64;
  cfg.h = 0.01;
  cfg.t_final = 4.0;
  // stock solver settings: mixing depth 5, damping 0.5, tol 1e-10
  const LatticeHamiltonian model = cfg.make_model();
  const LowRankInit init = cfg.make_init(model);
  const Trajectory traj =
      propagate(model, init, Scheme::PTIM, cfg.h, cfg.t_final, 1, cfg.solver);
  const ConservationSeries series = conservation_report(traj);
  double d_ortho = 0.0, d_tr = 0.0, d_tr2 = 0.0, d_tr3 = 0.0;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    d_ortho = std::max(d_ortho, series.ortho_defect[i]);
    d_tr = std::max(d_tr, std::abs(series.tr_sigma[i] - 20.0));
    d_tr2 = std::max(d_tr2, std::abs(series.tr_sigma2[i] - series.tr_sigma2[0]));
    d_tr3 = std::max(d_tr3, std::abs(series.tr_sigma3[i] - series.tr_sigma3[0]));
  }
  std::ostringstream oss;
  oss << "ortho " << d_ortho << ", |tr sigma - 20| " << d_tr << ", tr sigma^2 drift "
      << d_tr2 << ", tr sigma^3 fluctuation " << d_tr3;
  record(1, "conservation", d_ortho <= 1e-6 && d_tr <= 1e-6 && d_tr2 <= 1e-6 &&
                                d_tr3 <= 1e-4, oss.str());
  (void)opt;
}

void criterion_order(const RunOptions& opt) {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.ne = 60.0;
  cfg.rank = 80;
  cfg.t_final = 1.0;
  cfg.solver = robust_solver();
  const std::vector<double> hs = {0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  const double ref_h = 2e-5;
  const double sample_dt = 0.01;
  const int ref_every = static_cast<int>(std::llround(sample_dt / ref_h));

  Trajectory ref_pt, ref_sd;
  {
    std::vector<std::function<void()>> tasks;
    tasks.push_back([&] {
      ref_pt = propagate_cached(cfg, Scheme::PTIM, ref_h, cfg.t_final, ref_every, opt);
    });
    tasks.push_back([&] {
      ref_sd = propagate_cached(cfg, Scheme::SDIM, ref_h, cfg.t_final, ref_every, opt);
    });
    run_task_pool(tasks, opt.threads);
  }

  std::vector<double> err_rho_pt(hs.size()), err_rho_sd(hs.size());
  std::vector<double> err_phi(hs.size()), err_psi(hs.size());
  {
    const LatticeHamiltonian model = cfg.make_model();
    const LowRankInit init = cfg.make_init(model);
    std::vector<std::function<void()>> tasks;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      tasks.push_back([&, i] {
        const double h = hs[i];
        const int every = std::max(1, static_cast<int>(std::llround(sample_dt / h)));
        const Trajectory pt =
            propagate(model, init, Scheme::PTIM, h, cfg.t_final, every, cfg.solver);
        const Trajectory sd =
            propagate(model, init, Scheme::SDIM, h, cfg.t_final, every, cfg.solver);
        err_rho_pt[i] = relative_error(pt, ref_pt, Quantity::Rho, NormKind::Frobenius);
        err_rho_sd[i] = relative_error(sd, ref_sd, Quantity::Rho, NormKind::Frobenius);
        err_phi[i] = relative_error(pt, ref_pt, Quantity::Phi, NormKind::Frobenius);
        err_psi[i] = relative_error(sd, ref_sd, Quantity::Psi, NormKind::Frobenius);
      });
    }
    run_task_pool(tasks, opt.threads);
  }

  const double slope_pt = convergence_order(hs, err_rho_pt);
  const double slope_sd = convergence_order(hs, err_rho_sd);
  bool ordered = true;
  for (std::size_t i = 0; i < hs.size(); ++i)
    ordered = ordered && err_rho_pt[i] < err_rho_sd[i];
  std::ostringstream oss;
  oss << "slope_pt " << slope_pt << ", slope_sd " << slope_sd << ", rho errors pt/sd:";
  for (std::size_t i = 0; i < hs.size(); ++i)
    oss << " " << err_rho_pt[i] << "/" << err_rho_sd[i];
  record(2, "order of accuracy",
         slope_pt >= 1.8 && slope_pt <= 2.2 && slope_sd >= 1.8 && slope_sd <= 2.2 &&
             ordered,
         oss.str());
}

void criterion_oracle() {
  const testing::RandomHermitianModel model(16, 777);
  const LowRankInit init = testing::random_init(16, 3, 778);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const Trajectory pt = propagate(model, init, Scheme::PTIM, 1e-3, 0.1, 100, cfg);
  const Trajectory dense = propagate(model, init, Scheme::RK4Dense, 1e-5, 0.1, 10000, cfg);
  const double err =
      (pt.samples.back().dense(Scheme::PTIM) - dense.samples.back().density).norm();
  std::ostringstream oss;
  oss << "||rho_pt - rho_dense||_F = " << err << " after 100 steps";
  record(3, "oracle equivalence", err <= 1e-6, oss.str());
}

void criterion_stationarity() {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.cells = 1;
  cfg.points_per_cell = 32;
  cfg.model.drive_amplitude = 0.0;  // time independent
  const LatticeHamiltonian model = cfg.make_model();
  const LowRankInit init =
      fermi_dirac_init(model, 1.453, OccupationTarget::electron_count(4.0), 8);
  SolverConfig solver;
  PTState state{0.0, init.phi0, init.sigma0()};
  double drift = 0.0;
  for (int n = 0; n < 1000; ++n) {
    auto [next, report] = pt_im_step(model, state, 0.01, solver);
    state = std::move(next);
    drift = std::max(drift, (state.phi - init.phi0).norm());
  }
  std::ostringstream oss;
  oss << "max ||phi_n - phi_0||_F = " << drift << " over 1000 steps";
  record(4, "trivial stationarity", drift <= 10.0 * solver.tol, oss.str());
}

void criterion_bounds(const RunOptions& opt) {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.t_final = 1.0;
  cfg.h = 0.01;
  cfg.solver = robust_solver();
  const std::vector<double> ne_list = {10, 20, 30, 40, 50, 60};
  std::vector<double> agg_p(ne_list.size()), agg_rho(ne_list.size()),
      h3psi(ne_list.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < ne_list.size(); ++i) {
    tasks.push_back([&, i] {
      ExperimentConfig local = cfg;
      local.ne = ne_list[i];
      local.rank = static_cast<int>(ne_list[i]) + 20;
      const LatticeHamiltonian model = local.make_model();
      const LowRankInit init = local.make_init(model);
      const Trajectory traj =
          propagate(model, init, Scheme::PTIM, local.h, local.t_final, 10, local.solver);
      const BoundReport report = commutator_bounds(model, traj, local.h);
      agg_p[i] = report.projector_aggregate_h2();
      agg_rho[i] = report.density_aggregate_h2();
      h3psi[i] = report.h3psi_h2();
    });
  }
  run_task_pool(tasks, opt.threads);
  // gate on the density-side (mixed state) aggregate; the projector-side
  // aggregate is reported alongside but carries the full omega^2 drive term
  bool ok = true;
  std::ostringstream oss;
  for (std::size_t i = 0; i < ne_list.size(); ++i) {
    ok = ok && agg_rho[i] < h3psi[i];
    oss << " Ne=" << ne_list[i] << ": rho " << agg_rho[i] << " (P " << agg_p[i]
        << ") vs H3psi " << h3psi[i] << ";";
  }
  record(5, "commutator ordering", ok, oss.str());
}

void criterion_dipole(const RunOptions& opt) {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.ne = 60.0;
  cfg.rank = 80;
  cfg.t_final = 1.0;
  cfg.solver = robust_solver();
  const double coarse_h = 0.02;
  const double ref_h = 1e-4;
  const int ref_every = static_cast<int>(std::llround(coarse_h / ref_h));

  Trajectory ref, pt, sd;
  std::vector<std::function<void()>> tasks;
  tasks.push_back([&] {
    ref = propagate_cached(cfg, Scheme::SDIM, ref_h, cfg.t_final, ref_every, opt);
  });
  tasks.push_back([&] {
    const LatticeHamiltonian model = cfg.make_model();
    const LowRankInit init = cfg.make_init(model);
    pt = propagate(model, init, Scheme::PTIM, coarse_h, cfg.t_final, 1, cfg.solver);
    sd = propagate(model, init, Scheme::SDIM, coarse_h, cfg.t_final, 1, cfg.solver);
  });
  run_task_pool(tasks, opt.threads);

  const Grid1D grid = cfg.make_grid();
  double sup_pt = 0.0, sup_sd = 0.0;
  for (std::size_t i = 0; i < pt.samples.size(); ++i) {
    const double d_ref = dipole_moment(grid, ref.samples[i], ref.scheme);
    sup_pt = std::max(sup_pt,
                      std::abs(dipole_moment(grid, pt.samples[i], pt.scheme) - d_ref));
    sup_sd = std::max(sup_sd,
                      std::abs(dipole_moment(grid, sd.samples[i], sd.scheme) - d_ref));
  }
  std::ostringstream oss;
  oss << "sup dev pt " << sup_pt << " vs sd " << sup_sd << " over t in [0,1]";
  record(6, "dipole fidelity", sup_pt < sup_sd, oss.str());
}

void criterion_nonlinear(const RunOptions& opt) {
  ExperimentConfig cfg = driven_lattice_config();
  cfg.model.kind = ModelKind::NonlinearYukawa;
  cfg.ne = 60.0;
  cfg.rank = 80;
  cfg.t_final = 0.5;
  cfg.h = 0.01;
  cfg.solver = robust_solver();
  const double ref_h = 1e-4;
  const int ref_every = static_cast<int>(std::llround(cfg.h / ref_h));

  Trajectory ref_pt, ref_sd, pt, sd;
  std::vector<std::function<void()>> tasks;
  tasks.push_back([&] {
    ref_pt = propagate_cached(cfg, Scheme::PTIM, ref_h, cfg.t_final, ref_every, opt);
  });
  tasks.push_back([&] {
    ref_sd = propagate_cached(cfg, Scheme::SDIM, ref_h, cfg.t_final, ref_every, opt);
  });
  run_task_pool(tasks, opt.threads);
  {
    const LatticeHamiltonian model = cfg.make_model();
    const LowRankInit init = cfg.make_init(model);
    pt = propagate(model, init, Scheme::PTIM, cfg.h, cfg.t_final, 1, cfg.solver);
    sd = propagate(model, init, Scheme::SDIM, cfg.h, cfg.t_final, 1, cfg.solver);
  }
  const double err_phi = relative_error(pt, ref_pt, Quantity::Phi, NormKind::Frobenius);
  const double err_sigma = relative_error(pt, ref_pt, Quantity::Sigma, NormKind::Frobenius);
  const double err_psi = relative_error(sd, ref_sd, Quantity::Psi, NormKind::Frobenius);
  std::ostringstream oss;
  oss << "err_phi " << err_phi << ", err_sigma " << err_sigma << ", err_psi " << err_psi;
  record(7, "nonlinear regime", err_phi < err_psi && err_sigma < err_psi, oss.str());
}

void criterion_two_level() {
  const TwoLevelScan scan = two_level_adiabatic_scan({1.0, 0.5, 0.25, 0.125});
  std::ostringstream oss;
  oss << "pt exponent " << scan.pt_exponent << ", sd exponent " << scan.sd_exponent
      << ", gap " << scan.pt_exponent - scan.sd_exponent;
  record(8, "near-adiabatic scaling", scan.pt_exponent - scan.sd_exponent >= 0.7,
         oss.str());
}

void criterion_anderson() {
  bool ok = true;
  std::ostringstream oss;

  // mixing depth 0 must be the damped iteration, iterate by iterate
  {
    SolverConfig cfg;
    cfg.mixing_depth = 0;
    cfg.damping = 0.5;
    cfg.tol = 1e-12;
    cfg.max_iterations = 200;
    const RealMatrix a = 0.5 * RealMatrix::Identity(6, 6);
    const RealVector b = RealVector::LinSpaced(6, 1.0, 2.0);
    std::vector<RealVector> seen;
    anderson_solve(
        [&](const RealVector& x) {
          seen.push_back(x);
          return (a * x + b).eval();
        },
        RealVector::Zero(6), cfg);
    RealVector x = RealVector::Zero(6);
    for (const auto& it : seen) {
      if ((it - x).norm() != 0.0) ok = false;
      x = x - cfg.damping * (x - (a * x + b));
    }
    oss << "depth-0 identity " << (ok ? "exact" : "VIOLATED");
  }

  // spectral-radius-0.9 affine contraction vs direct solve
  {
    std::mt19937 gen(4);
    std::normal_distribution<double> dist(0.0, 1.0);
    RealMatrix a(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) a(i, j) = dist(gen);
    a = 0.5 * (a + a.transpose()).eval();
    a *= 0.9 / a.eigenvalues().cwiseAbs().maxCoeff();
    RealVector b(20);
    for (int i = 0; i < 20; ++i) b[i] = dist(gen);
    const RealVector expected =
        (RealMatrix::Identity(20, 20) - a).lu().solve(b);
    SolverConfig cfg;  // stock settings
    SolveReport report;
    const RealVector x = anderson_solve(
        [&](const RealVector& v) { return (a * v + b).eval(); }, RealVector::Zero(20),
        cfg, &report);
    const double err = (x - expected).norm() / expected.norm();
    ok = ok && report.converged && report.iterations <= 50 && err < 1e-8;
    oss << "; contraction iters " << report.iterations << ", err vs direct solve "
        << err;
  }
  record(9, "anderson solver", ok, oss.str());
}

}  // namespace

int main(int argc, char** argv) {
  RunOptions opt;
  opt.out_dir = "acceptance_out";
  opt.threads = 0;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cache" && i + 1 < argc) {
      opt.cache_dir = argv[++i];
    } else if (arg == "--threads" && i + 1 < argc) {
      opt.threads = std::atoi(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      only.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--cache dir] [--threads n] [--only k]...\n";
      return 2;
    }
  }
  if (opt.cache_dir.empty()) opt.cache_dir = "acceptance_cache";
  opt.log = [](const std::string& msg) { std::cout << "  .. " << msg << "\n" << std::flush; };

  const auto wants = [&](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };

  try {
    if (wants(1)) criterion_conservation(opt);
    if (wants(2)) criterion_order(opt);
    if (wants(3)) criterion_oracle();
    if (wants(4)) criterion_stationarity();
    if (wants(5)) criterion_bounds(opt);
    if (wants(6)) criterion_dipole(opt);
    if (wants(7)) criterion_nonlinear(opt);
    if (wants(8)) criterion_two_level();
    if (wants(9)) criterion_anderson();
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << "\n";
    return 1;
  }

  int failed = 0;
  for (const auto& c : g_results)
    if (!c.passed) ++failed;
  std::cout << g_results.size() - failed << "/" << g_results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
