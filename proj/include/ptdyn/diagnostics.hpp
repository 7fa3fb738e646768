#pragma once

#include <array>
#include <vector>

#include "ptdyn/integrators.hpp"

namespace ptdyn {

enum class Quantity { Phi, Sigma, Psi, Rho };

/// sup over shared sample times of ||X_k - X_ref(t_k)|| / ||X_ref(t_k)||.
/// Throws if the trajectories share no sample times.
double relative_error(const Trajectory& numeric, const Trajectory& reference,
                      Quantity quantity, NormKind norm);

/// Tr(x rho) = sum_j x_j rho_jj, evaluated without forming the dense density.
double dipole_moment(const Grid1D& grid, const Matrix& phi, const Matrix& sigma);
double dipole_moment(const Grid1D& grid, const Matrix& rho);
double dipole_moment(const Grid1D& grid, const StateSample& sample, Scheme scheme);

struct ConservationSeries {
  std::vector<double> t;
  std::vector<double> ortho_defect;  // ||phi^H phi - I||_F
  std::vector<double> tr_sigma;
  std::vector<double> tr_sigma2;
  std::vector<double> tr_sigma3;  // recorded, not conserved by the scheme
};

ConservationSeries conservation_report(const Trajectory& traj);

/// Commutator terms entering the local-error bounds, evaluated on one sample
/// of a density-independent model. All norms are operator norms via SVD.
struct BoundSample {
  double t = 0.0;
  // projector side: [H,P], [H_t,P], [H_tt,P], [H,[H,P]], [H_t,[H,P]],
  //                 [H,[H_t,P]], [H,[H,[H,P]]]
  std::array<double, 7> projector_terms{};
  // density side: same commutators with rho in place of P
  std::array<double, 7> density_terms{};
  // wavefunction side: ||H^3 psi||, ||H H_t psi||, ||H_t H psi||, ||H_tt psi||
  std::array<double, 4> wavefunction_terms{};

  /// Third-derivative bound aggregates (coefficients as in the bounds):
  /// ||[H_tt,X]|| + 2||[H_t,[H,X]]|| + ||[H,[H_t,X]]|| + ||[H,[H,[H,X]]]||.
  double projector_aggregate() const;
  double density_aggregate() const;
  /// ||H^3 psi|| + ||H H_t psi|| + 2||H_t H psi|| + ||H_tt psi||.
  double wavefunction_aggregate() const;
};

struct BoundReport {
  double h = 0.0;
  std::vector<BoundSample> samples;

  // max over samples, scaled by h^2
  double projector_aggregate_h2() const;
  double density_aggregate_h2() const;
  double wavefunction_aggregate_h2() const;
  double h3psi_h2() const;  // max ||H^3 psi|| h^2 alone
};

/// Evaluates the bound terms along a PT trajectory. Rejects density-dependent
/// models: their H_rho / H_rhorho contributions are not covered here.
BoundReport commutator_bounds(const HamiltonianModel& model, const Trajectory& traj,
                              double h);

struct OrbitalError {
  double energy = 0.0;  // initial orbital energy
  double error = 0.0;   // 2-norm of the column difference at the final time
};

/// Per-orbital errors at the last shared sample; numeric and reference must
/// come from the same dynamics (orbital phases are gauge dependent).
std::vector<OrbitalError> orbital_error_histogram(const Trajectory& numeric,
                                                  const Trajectory& reference,
                                                  const RealVector& energies);

/// Least-squares slope of log(error) against log(h); needs >= 3 points.
double convergence_order(const std::vector<double>& step_sizes,
                         const std::vector<double>& errors);

/// Near-adiabatic surrogate on a two-level avoided crossing
///   H(t)/eps = scale [[t - 1/2, delta], [delta, -(t - 1/2)]] / eps:
/// propagates the singularly perturbed Schroedinger dynamics for each eps and
/// fits the eps-exponents of the PT commutator aggregate and the Schroedinger
/// wavefunction aggregate.
struct TwoLevelScan {
  std::vector<double> eps;
  std::vector<double> pt_aggregate;
  std::vector<double> sd_aggregate;
  double pt_exponent = 0.0;
  double sd_exponent = 0.0;
};

TwoLevelScan two_level_adiabatic_scan(const std::vector<double>& eps_values,
                                      double scale = 8.0, double delta = 1.0,
                                      double t_final = 1.0);

}  // namespace ptdyn
