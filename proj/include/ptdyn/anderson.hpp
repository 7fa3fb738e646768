#pragma once

#include <functional>

#include "ptdyn/types.hpp"

namespace ptdyn {

struct SolverConfig {
  int mixing_depth = 5;        // history window; 0 falls back to damped iteration
  double damping = 0.5;        // alpha, C0 = alpha*I
  double tol = 1e-10;          // relative residual ||r||/max(||x||, 1)
  int max_iterations = 100;
  double regularization = 1e-12;  // Tikhonov factor, relative to the Gram scale
  bool orthonormalize = false;    // QR cleanup of the orbital block after each step
};

struct SolveReport {
  int iterations = 0;   // number of map evaluations
  double residual = 0.0;
  bool converged = false;
};

using FixedPointMap = std::function<RealVector(const RealVector&)>;

/// Anderson-accelerated fixed-point solve of x = T(x).
///
/// Update: x_{k+1} = x_k - C0 (I - Y Y^+) r_k - S Y^+ r_k with r = x - T(x)
/// and S, Y the windows of iterate/residual differences. Y^+ r is computed
/// from the regularized normal equations; rank-deficient windows drop their
/// oldest column first. A runaway residual (4x the best seen) clears the
/// window and halves the damping, which keeps large-step propagations from
/// blowing up during the first few iterations.
///
/// Throws SolverError when the map returns non-finite values or the residual
/// does not reach cfg.tol within cfg.max_iterations.
RealVector anderson_solve(const FixedPointMap& map, RealVector x0,
                          const SolverConfig& cfg, SolveReport* report = nullptr);

}  // namespace ptdyn
