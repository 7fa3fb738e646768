#pragma once

#include <filesystem>
#include <functional>

#include "ptdyn/config.hpp"
#include "ptdyn/diagnostics.hpp"
#include "ptdyn/io.hpp"

namespace ptdyn {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  int threads = 0;     // work-pool width; 0 picks the hardware count
  bool use_cache = true;
  std::filesystem::path cache_dir;  // default: <out_dir>/cache, or $PTPROP_CACHE_DIR
  std::function<void(const std::string&)> log;  // optional progress sink

  std::filesystem::path effective_cache_dir() const;
};

/// Runs `tasks` on a pool of at most `threads` workers; results are gathered
/// by index so the output order never depends on scheduling. Exceptions are
/// rethrown on the caller thread (first failing index wins).
void run_task_pool(const std::vector<std::function<void()>>& tasks, int threads);

/// Propagates with content-hash reference caching: the key covers the model,
/// initial-state target, scheme, step size, horizon, sampling, and solver
/// settings. Cache hits are reloaded bit-exactly.
Trajectory propagate_cached(const ExperimentConfig& cfg, Scheme scheme, double h,
                            double t_final, int sample_every, const RunOptions& opt);

/// run: trajectory checkpoint + conservation series (CSV and SVG).
void cmd_run(const ExperimentConfig& cfg, const RunOptions& opt);

/// sweep-h: per-dynamics relative errors against a fine reference, plus
/// fitted log-log slopes.
void cmd_sweep_h(const ExperimentConfig& cfg, const RunOptions& opt);

/// sweep-ne: per-N_e errors, commutator-bound aggregates, orbital histograms.
void cmd_sweep_ne(const ExperimentConfig& cfg, const RunOptions& opt);

/// dipole: coarse PT/SD dipole traces against a fine reference.
void cmd_dipole(const ExperimentConfig& cfg, const RunOptions& opt);

/// bounds: commutator-bound terms along one PT trajectory.
void cmd_bounds(const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace ptdyn
