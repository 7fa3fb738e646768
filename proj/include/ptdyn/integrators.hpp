#pragma once

#include <utility>
#include <vector>

#include "ptdyn/anderson.hpp"
#include "ptdyn/dynamics.hpp"
#include "ptdyn/model.hpp"

namespace ptdyn {

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
  double ortho_defect = 0.0;
  double wall_time = 0.0;
  bool converged = false;
};

/// One implicit-midpoint step of the parallel-transport dynamics. The
/// midpoint unknowns (phi_{n+1}, sigma_{n+1}) are solved by anderson_solve
/// on their real/imaginary vectorization, starting from (phi_n, sigma_n).
/// sigma is re-symmetrized after the solve.
std::pair<PTState, StepReport> pt_im_step(const HamiltonianModel& model,
                                          const PTState& state, double h,
                                          const SolverConfig& cfg);

/// Implicit midpoint for the Schroedinger gauge with frozen occupations.
std::pair<SDState, StepReport> sd_im_step(const HamiltonianModel& model,
                                          const SDState& state, double h,
                                          const SolverConfig& cfg);

/// Classical RK4 update of the dense von Neumann equation; reference oracle.
Matrix rk4_dense_step(const HamiltonianModel& model, double t, const Matrix& rho,
                      double h);

enum class Scheme { PTIM, SDIM, RK4Dense };

const char* scheme_name(Scheme s);

struct StateSample {
  double t = 0.0;
  Matrix orbitals;    // phi or psi (empty for the dense scheme)
  Matrix occupation;  // sigma, or diag(occ0) for SD (empty for dense)
  Matrix density;     // dense rho (RK4Dense only)

  Matrix dense(const Scheme scheme) const;
};

struct Trajectory {
  Scheme scheme = Scheme::PTIM;
  int n_grid = 0;
  int rank = 0;
  double step_size = 0.0;
  RealVector initial_occupation;
  std::vector<StateSample> samples;
  std::vector<StepReport> reports;
};

class PropagationError : public std::runtime_error {
public:
  PropagationError(const std::string& msg, std::size_t step, Trajectory partial)
      : std::runtime_error(msg), step(step), partial(std::move(partial)) {}
  std::size_t step;
  Trajectory partial;
};

/// Propagate `init` to t_final on the uniform grid t_n = n h, sampling every
/// `sample_every` steps (the initial and final states are always kept).
/// Deterministic; a failing step raises PropagationError carrying the
/// trajectory accumulated so far.
Trajectory propagate(const HamiltonianModel& model, const LowRankInit& init,
                     Scheme scheme, double h, double t_final, int sample_every,
                     const SolverConfig& cfg);

}  // namespace ptdyn
