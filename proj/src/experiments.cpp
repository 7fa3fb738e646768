#include "ptdyn/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace ptdyn {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void log_line(const RunOptions& opt, const std::string& msg) {
  if (opt.log) opt.log(msg);
}

int pool_width(int requested, std::size_t tasks) {
  int w = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  return static_cast<int>(std::min<std::size_t>(w, tasks));
}

}  // namespace

fs::path RunOptions::effective_cache_dir() const {
  if (!cache_dir.empty()) return cache_dir;
  if (const char* env = std::getenv("PTPROP_CACHE_DIR"); env && *env)
    return fs::path(env);
  return out_dir / "cache";
}

void run_task_pool(const std::vector<std::function<void()>>& tasks, int threads) {
  if (tasks.empty()) return;
  const int width = pool_width(threads, tasks.size());
  if (width == 1) {
    for (const auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  std::vector<std::thread> workers;
  workers.reserve(width);
  for (int w = 0; w < width; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          tasks[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Trajectory propagate_cached(const ExperimentConfig& cfg, Scheme scheme, double h,
                            double t_final, int sample_every, const RunOptions& opt) {
  fs::path cache_file;
  if (opt.use_cache) {
    const std::string key = cfg.canonical_string(scheme, h, t_final, sample_every);
    std::ostringstream name;
    name << "ref-" << std::hex << std::setw(16) << std::setfill('0')
         << fnv1a_hash(key) << ".bin";
    cache_file = opt.effective_cache_dir() / name.str();
    if (fs::exists(cache_file)) {
      log_line(opt, "cache hit: " + cache_file.string());
      return load_trajectory(cache_file);
    }
  }
  const LatticeHamiltonian model = cfg.make_model();
  const LowRankInit init = cfg.make_init(model);
  Trajectory traj = propagate(model, init, scheme, h, t_final, sample_every, cfg.solver);
  if (opt.use_cache) {
    fs::create_directories(cache_file.parent_path());
    save_trajectory(traj, cache_file);
    log_line(opt, "cached: " + cache_file.string());
  }
  return traj;
}

void cmd_run(const ExperimentConfig& cfg, const RunOptions& opt) {
  fs::create_directories(opt.out_dir);
  const LatticeHamiltonian model = cfg.make_model();
  const LowRankInit init = cfg.make_init(model);
  log_line(opt, "run: scheme=" + std::string(scheme_name(cfg.scheme)) +
                    " h=" + format_full(cfg.h) + " T=" + format_full(cfg.t_final) +
                    " mu=" + format_full(init.mu));
  const Trajectory traj = propagate(model, init, cfg.scheme, cfg.h, cfg.t_final,
                                    cfg.sample_every, cfg.solver);
  save_trajectory(traj, opt.out_dir / "trajectory.bin");

  const ConservationSeries cons = conservation_report(traj);
  std::vector<std::vector<double>> rows;
  rows.reserve(cons.t.size());
  for (std::size_t i = 0; i < cons.t.size(); ++i)
    rows.push_back({cons.t[i], cons.ortho_defect[i], cons.tr_sigma[i],
                    cons.tr_sigma2[i], cons.tr_sigma3[i]});
  write_csv(opt.out_dir / "conservation.csv",
            {"t", "ortho_defect", "tr_sigma", "tr_sigma2", "tr_sigma3"}, rows);

  std::vector<SvgSeries> series(4);
  series[0] = {"||phi^H phi - I||_F", "#1f77b4", cons.t, cons.ortho_defect};
  const auto drift = [](const std::vector<double>& v) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = std::abs(v[i] - v[0]) + 1e-300;
    return d;
  };
  series[1] = {"|tr sigma - tr sigma(0)|", "#d62728", cons.t, drift(cons.tr_sigma)};
  series[2] = {"|tr sigma^2 drift|", "#2ca02c", cons.t, drift(cons.tr_sigma2)};
  series[3] = {"|tr sigma^3 drift|", "#9467bd", cons.t, drift(cons.tr_sigma3)};
  write_svg_plot(opt.out_dir / "conservation.svg", "conservation drift", series,
                 false, true);
  log_line(opt, "run: wrote " + (opt.out_dir / "conservation.csv").string());
}

void cmd_sweep_h(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.h_list.empty()) throw ConfigError("sweep-h: run.h_list is required");
  if (!cfg.reference_h) throw ConfigError("sweep-h: reference.h is required");
  fs::create_directories(opt.out_dir);
  const double ref_h = *cfg.reference_h;
  // sample references on the coarsest grid that all runs can hit
  const double sample_dt = cfg.h_list.back();
  const int ref_every = std::max(1, static_cast<int>(std::llround(sample_dt / ref_h)));

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
  log_line(opt, "sweep-h: references ready");

  struct Row {
    double h;
    double err_phi = kNaN, err_sigma = kNaN, err_psi = kNaN, err_rho = kNaN;
  };
  std::vector<Row> pt_rows(cfg.h_list.size()), sd_rows(cfg.h_list.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
    tasks.push_back([&, i] {
      const double h = cfg.h_list[i];
      const int every = std::max(1, static_cast<int>(std::llround(sample_dt / h)));
      const LatticeHamiltonian model = cfg.make_model();
      const LowRankInit init = cfg.make_init(model);
      const Trajectory num_pt =
          propagate(model, init, Scheme::PTIM, h, cfg.t_final, every, cfg.solver);
      const Trajectory num_sd =
          propagate(model, init, Scheme::SDIM, h, cfg.t_final, every, cfg.solver);
      pt_rows[i] = {h, relative_error(num_pt, ref_pt, Quantity::Phi, cfg.norm),
                    relative_error(num_pt, ref_pt, Quantity::Sigma, cfg.norm), kNaN,
                    relative_error(num_pt, ref_pt, Quantity::Rho, cfg.norm)};
      sd_rows[i] = {h, kNaN, kNaN,
                    relative_error(num_sd, ref_sd, Quantity::Psi, cfg.norm),
                    relative_error(num_sd, ref_sd, Quantity::Rho, cfg.norm)};
      log_line(opt, "sweep-h: finished h=" + format_full(h));
    });
  }
  run_task_pool(tasks, opt.threads);

  std::vector<std::vector<double>> rows;
  for (const auto& r : pt_rows)
    rows.push_back({0.0, r.h, r.err_phi, r.err_sigma, r.err_psi, r.err_rho});
  for (const auto& r : sd_rows)
    rows.push_back({1.0, r.h, r.err_phi, r.err_sigma, r.err_psi, r.err_rho});

  std::vector<std::string> comments = {"dynamics: 0 = pt, 1 = sd"};
  if (cfg.h_list.size() >= 3) {
    std::vector<double> e_pt, e_sd;
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
      e_pt.push_back(pt_rows[i].err_rho);
      e_sd.push_back(sd_rows[i].err_rho);
    }
    const double slope_pt = convergence_order(cfg.h_list, e_pt);
    const double slope_sd = convergence_order(cfg.h_list, e_sd);
    comments.push_back("slope_rho_pt = " + format_full(slope_pt));
    comments.push_back("slope_rho_sd = " + format_full(slope_sd));
    std::vector<double> f_pt, f_sd;
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
      f_pt.push_back(pt_rows[i].err_phi);
      f_sd.push_back(sd_rows[i].err_psi);
    }
    comments.push_back("slope_phi_pt = " + format_full(convergence_order(cfg.h_list, f_pt)));
    comments.push_back("slope_psi_sd = " + format_full(convergence_order(cfg.h_list, f_sd)));
  }
  write_csv(opt.out_dir / "errors_h.csv",
            {"dynamics", "h", "err_phi", "err_sigma", "err_psi", "err_rho"}, rows,
            comments);
  log_line(opt, "sweep-h: wrote " + (opt.out_dir / "errors_h.csv").string());
}

void cmd_sweep_ne(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.ne_list.empty()) throw ConfigError("sweep-ne: sweep.ne_list is required");
  if (cfg.model.kind != ModelKind::LinearDrivenLattice)
    throw ConfigError("sweep-ne: the commutator bounds require the linear model");
  if (!cfg.reference_h) throw ConfigError("sweep-ne: reference.h is required");
  fs::create_directories(opt.out_dir);
  const double ref_h = *cfg.reference_h;

  struct NePoint {
    double ne = 0.0;
    double err_phi_2 = kNaN, err_psi_2 = kNaN;
    double err_rho_pt_2 = kNaN, err_rho_sd_2 = kNaN;
    double err_rho_pt_f = kNaN, err_rho_sd_f = kNaN;
    double bound_p = kNaN, bound_rho = kNaN, h3psi = kNaN;
    std::vector<OrbitalError> hist_pt, hist_sd;
  };
  std::vector<NePoint> points(cfg.ne_list.size());

  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < cfg.ne_list.size(); ++i) {
    tasks.push_back([&, i] {
      ExperimentConfig local = cfg;
      local.ne = cfg.ne_list[i];
      local.mu.reset();
      local.rank = static_cast<int>(cfg.ne_list[i]) + cfg.rank_offset;
      const LatticeHamiltonian model = local.make_model();
      const LowRankInit init = local.make_init(model);
      const int every = std::max(1, local.sample_every);
      const int ref_every =
          std::max(1, static_cast<int>(std::llround(every * local.h / ref_h)));

      const Trajectory num_pt = propagate(model, init, Scheme::PTIM, local.h,
                                          local.t_final, every, local.solver);
      const Trajectory num_sd = propagate(model, init, Scheme::SDIM, local.h,
                                          local.t_final, every, local.solver);
      RunOptions ref_opt = opt;
      ref_opt.log = nullptr;
      const Trajectory ref_pt = propagate_cached(local, Scheme::PTIM, ref_h,
                                                 local.t_final, ref_every, ref_opt);
      const Trajectory ref_sd = propagate_cached(local, Scheme::SDIM, ref_h,
                                                 local.t_final, ref_every, ref_opt);

      NePoint& p = points[i];
      p.ne = local.ne.value();
      p.err_phi_2 = relative_error(num_pt, ref_pt, Quantity::Phi, NormKind::Spectral);
      p.err_psi_2 = relative_error(num_sd, ref_sd, Quantity::Psi, NormKind::Spectral);
      p.err_rho_pt_2 = relative_error(num_pt, ref_pt, Quantity::Rho, NormKind::Spectral);
      p.err_rho_sd_2 = relative_error(num_sd, ref_sd, Quantity::Rho, NormKind::Spectral);
      p.err_rho_pt_f = relative_error(num_pt, ref_pt, Quantity::Rho, NormKind::Frobenius);
      p.err_rho_sd_f = relative_error(num_sd, ref_sd, Quantity::Rho, NormKind::Frobenius);
      const BoundReport bounds = commutator_bounds(model, num_pt, local.h);
      p.bound_p = bounds.projector_aggregate_h2();
      p.bound_rho = bounds.density_aggregate_h2();
      p.h3psi = bounds.h3psi_h2();
      p.hist_pt = orbital_error_histogram(num_pt, ref_pt, init.energies);
      p.hist_sd = orbital_error_histogram(num_sd, ref_sd, init.energies);
      log_line(opt, "sweep-ne: finished N_e=" + format_full(p.ne));
    });
  }
  run_task_pool(tasks, opt.threads);

  std::vector<std::vector<double>> wf_rows, rho_rows, bound_rows;
  for (const auto& p : points) {
    wf_rows.push_back({p.ne, p.err_phi_2, p.err_psi_2});
    rho_rows.push_back({p.ne, p.err_rho_pt_2, p.err_rho_sd_2, p.err_rho_pt_f,
                        p.err_rho_sd_f});
    bound_rows.push_back({p.ne, p.bound_p, p.bound_rho, p.h3psi});
  }
  write_csv(opt.out_dir / "wavefunction_errors.csv", {"ne", "err_phi_pt", "err_psi_sd"},
            wf_rows);
  write_csv(opt.out_dir / "rho_errors.csv",
            {"ne", "pt_2norm", "sd_2norm", "pt_fnorm", "sd_fnorm"}, rho_rows);
  write_csv(opt.out_dir / "bounds_ne.csv",
            {"ne", "pt_projector_bound_h2", "pt_density_bound_h2", "h3psi_h2"},
            bound_rows,
            {"bounds: max over samples of the third-derivative aggregates, x h^2"});
  for (const auto& p : points) {
    const auto write_hist = [&](const std::vector<OrbitalError>& hist,
                                const std::string& tag) {
      std::vector<std::vector<double>> rows;
      for (const auto& e : hist) rows.push_back({e.energy, e.error});
      std::ostringstream name;
      name << "histogram_" << tag << "_ne" << static_cast<int>(p.ne) << ".csv";
      write_csv(opt.out_dir / name.str(), {"energy", "error"}, rows);
    };
    write_hist(p.hist_pt, "pt");
    write_hist(p.hist_sd, "sd");
  }
  log_line(opt, "sweep-ne: wrote CSV tables to " + opt.out_dir.string());
}

void cmd_dipole(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (!cfg.reference_h) throw ConfigError("dipole: reference.h is required");
  fs::create_directories(opt.out_dir);
  const double ref_h = *cfg.reference_h;
  const Scheme ref_scheme = cfg.reference_scheme.value_or(Scheme::SDIM);
  const double coarse = cfg.coarse_h;
  const int ref_every = std::max(1, static_cast<int>(std::llround(coarse / ref_h)));

  Trajectory pt, sd, ref;
  std::vector<std::function<void()>> tasks;
  tasks.push_back([&] {
    ref = propagate_cached(cfg, ref_scheme, ref_h, cfg.t_final, ref_every, opt);
  });
  tasks.push_back([&] {
    const LatticeHamiltonian model = cfg.make_model();
    const LowRankInit init = cfg.make_init(model);
    pt = propagate(model, init, Scheme::PTIM, coarse, cfg.t_final, 1, cfg.solver);
    sd = propagate(model, init, Scheme::SDIM, coarse, cfg.t_final, 1, cfg.solver);
  });
  run_task_pool(tasks, opt.threads);

  const Grid1D grid = cfg.make_grid();
  std::vector<std::vector<double>> rows;
  double sup_pt = 0.0, sup_sd = 0.0;
  std::size_t jr = 0;
  for (std::size_t i = 0; i < pt.samples.size(); ++i) {
    const double t = pt.samples[i].t;
    while (jr + 1 < ref.samples.size() && ref.samples[jr].t < t - 1e-9) ++jr;
    if (jr >= ref.samples.size() || std::abs(ref.samples[jr].t - t) > 1e-9) continue;
    const double d_pt = dipole_moment(grid, pt.samples[i], pt.scheme);
    const double d_sd = dipole_moment(grid, sd.samples[i], sd.scheme);
    const double d_ref = dipole_moment(grid, ref.samples[jr], ref.scheme);
    sup_pt = std::max(sup_pt, std::abs(d_pt - d_ref));
    sup_sd = std::max(sup_sd, std::abs(d_sd - d_ref));
    rows.push_back({t, d_pt, d_sd, d_ref});
  }
  const std::vector<std::string> comments = {
      "sup |dip_pt - dip_ref| = " + format_full(sup_pt),
      "sup |dip_sd - dip_ref| = " + format_full(sup_sd)};
  write_csv(opt.out_dir / "dipole.csv", {"t", "dip_pt_coarse", "dip_sd_coarse", "dip_ref"},
            rows, comments);

  std::vector<SvgSeries> series(3);
  for (const auto& r : rows) {
    series[0].x.push_back(r[0]);
    series[0].y.push_back(r[1]);
    series[1].x.push_back(r[0]);
    series[1].y.push_back(r[2]);
    series[2].x.push_back(r[0]);
    series[2].y.push_back(r[3]);
  }
  series[0].label = "PT-IM h=" + format_full(coarse);
  series[0].color = "#1f77b4";
  series[1].label = "SD-IM h=" + format_full(coarse);
  series[1].color = "#d62728";
  series[2].label = "reference";
  series[2].color = "#2ca02c";
  write_svg_plot(opt.out_dir / "dipole.svg", "dipole moment", series, false, false);
  log_line(opt, "dipole: sup dev pt=" + format_full(sup_pt) +
                    " sd=" + format_full(sup_sd));
}

void cmd_bounds(const ExperimentConfig& cfg, const RunOptions& opt) {
  fs::create_directories(opt.out_dir);
  const LatticeHamiltonian model = cfg.make_model();
  const LowRankInit init = cfg.make_init(model);
  const Trajectory traj = propagate(model, init, Scheme::PTIM, cfg.h, cfg.t_final,
                                    cfg.sample_every, cfg.solver);
  const BoundReport report = commutator_bounds(model, traj, cfg.h);
  std::vector<std::vector<double>> rows;
  for (const auto& s : report.samples) {
    std::vector<double> row = {s.t};
    for (const double v : s.projector_terms) row.push_back(v);
    for (const double v : s.density_terms) row.push_back(v);
    for (const double v : s.wavefunction_terms) row.push_back(v);
    row.push_back(s.projector_aggregate());
    row.push_back(s.density_aggregate());
    row.push_back(s.wavefunction_aggregate());
    rows.push_back(std::move(row));
  }
  write_csv(opt.out_dir / "bounds.csv",
            {"t",
             "HP", "HtP", "HttP", "HHP", "HtHP", "HHtP", "HHHP",
             "Hrho", "Htrho", "Httrho", "HHrho", "HtHrho", "HHtrho", "HHHrho",
             "H3psi", "HHtpsi", "HtHpsi", "Httpsi",
             "pt_projector_aggregate", "pt_density_aggregate", "sd_aggregate"},
            rows,
            {"aggregate_h2: projector=" + format_full(report.projector_aggregate_h2()) +
                 " density=" + format_full(report.density_aggregate_h2()) +
                 " h3psi=" + format_full(report.h3psi_h2())});
  log_line(opt, "bounds: wrote " + (opt.out_dir / "bounds.csv").string());
}

}  // namespace ptdyn
