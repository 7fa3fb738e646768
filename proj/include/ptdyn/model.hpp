#pragma once

#include <memory>
#include <optional>

#include "ptdyn/grid.hpp"
#include "ptdyn/types.hpp"

namespace ptdyn {

/// Evaluator of a (possibly density-dependent) Hermitian Hamiltonian H(t, rho).
///
/// The density-independent part and the exchange part are kept separate so
/// propagators can reuse the former across fixed-point iterations within a
/// time step.
class HamiltonianModel {
public:
  virtual ~HamiltonianModel() = default;

  virtual int dimension() const = 0;
  virtual bool density_dependent() const = 0;

  /// Density-independent part of H at time t, Hermitian.
  virtual Matrix base_matrix(double t) const = 0;

  /// Density-dependent part; zero unless overridden. rho is assumed Hermitian.
  virtual Matrix exchange_matrix(const Matrix& rho) const;

  /// Analytic dH/dt and d2H/dt2 of the density-independent part.
  virtual Matrix time_derivative(double t) const = 0;
  virtual Matrix second_time_derivative(double t) const = 0;

  /// Full H(t); requires a density-independent model.
  Matrix assemble(double t) const;
  /// Full H(t, rho); rejects non-Hermitian rho (max entry deviation > 1e-8)
  /// and non-finite t.
  Matrix assemble(double t, const Matrix& rho) const;
  /// Full H(t, phi sigma phi^H) without requiring the caller to form rho.
  Matrix assemble_low_rank(double t, const Matrix& phi, const Matrix& sigma) const;
};

enum class ModelKind { LinearDrivenLattice, NonlinearYukawa };
enum class LaplacianScheme { Spectral, FiniteDifference2 };
enum class StaticPotential { Cosine, Harmonic };  // cos(x) or x^2

struct ModelParams {
  ModelKind kind = ModelKind::LinearDrivenLattice;
  double drive_amplitude = 10.0;
  double drive_frequency = 16.0 * EIGEN_PI;
  double kappa = 0.01;  // Yukawa screening
  double eps0 = 100.0;  // Yukawa permittivity
  LaplacianScheme laplacian = LaplacianScheme::Spectral;
  std::optional<StaticPotential> potential;  // defaults to Cosine / Harmonic by kind

  StaticPotential effective_potential() const {
    if (potential) return *potential;
    return kind == ModelKind::NonlinearYukawa ? StaticPotential::Harmonic
                                              : StaticPotential::Cosine;
  }
};

/// Dense kinetic matrix -Laplacian/2 with periodic boundary conditions.
/// Spectral: plane waves e^{ikx} are exact eigenvectors with eigenvalue k^2/2,
/// k in {-N_g/2+1, ..., N_g/2}/cells. FiniteDifference2: the 2nd-order stencil
/// (1/dx^2) [-1/2, 1, -1/2] with periodic wrap.
Matrix kinetic_matrix(const Grid1D& grid, LaplacianScheme scheme = LaplacianScheme::Spectral);

/// Driven 1D lattice, H(t) = -Laplacian/2 + V(x) + A sin(x/L) sin(omega t),
/// optionally plus the Yukawa screened-exchange term
///   (U[rho])_{jl} = -dx K(x_j, x_l) rho_{jl},
///   K(x, y) = 2 pi/(kappa eps0) exp(-kappa d(x, y)),
/// with d the minimum-image periodic distance.
class LatticeHamiltonian final : public HamiltonianModel {
public:
  LatticeHamiltonian(Grid1D grid, ModelParams params);

  int dimension() const override { return grid_.n_points; }
  bool density_dependent() const override {
    return params_.kind == ModelKind::NonlinearYukawa;
  }
  Matrix base_matrix(double t) const override;
  Matrix exchange_matrix(const Matrix& rho) const override;
  Matrix time_derivative(double t) const override;
  Matrix second_time_derivative(double t) const override;

  const Grid1D& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const Matrix& kinetic() const { return kinetic_; }
  const RealVector& static_potential() const { return static_pot_; }
  const RealMatrix& yukawa_kernel() const { return kernel_; }

private:
  Grid1D grid_;
  ModelParams params_;
  Matrix kinetic_;
  RealVector static_pot_;     // V(x_j)
  RealVector drive_profile_;  // A sin(x_j/L)
  RealMatrix kernel_;         // K(x_j, x_l), empty for the linear model
};

/// Low-rank Fermi-Dirac initial state.
struct LowRankInit {
  Matrix phi0;             // N_g x N, orthonormal columns
  RealVector occupations;  // diag of sigma0, values in (0, 1]
  double mu = 0.0;         // chemical potential after truncation readjustment
  double beta = 0.0;
  double n_electrons = 0.0;  // Tr sigma0
  int rank = 0;
  RealVector energies;  // eigenvalues of H(0) for the selected orbitals

  Matrix sigma0() const {
    return occupations.cast<Complex>().asDiagonal().toDenseMatrix();
  }
};

struct OccupationTarget {
  enum class Kind { ElectronCount, ChemicalPotential };
  Kind kind;
  double value;

  static OccupationTarget electron_count(double ne) {
    return {Kind::ElectronCount, ne};
  }
  static OccupationTarget chemical_potential(double mu) {
    return {Kind::ChemicalPotential, mu};
  }
};

/// Diagonalize H(0), fill the Fermi-Dirac occupations, keep the `rank` most
/// occupied orbitals and readjust mu on the kept levels so the truncated
/// trace matches the electron count again (to 1e-10).
///
/// For a density-dependent model the ground state is found by a damped
/// self-consistent loop (mixing 0.5, ||drho|| <= 1e-9, at most 200 sweeps).
LowRankInit fermi_dirac_init(const HamiltonianModel& model, double beta,
                             const OccupationTarget& target, int rank);

/// rho = phi sigma phi^H, re-symmetrized.
Matrix dense_density(const Matrix& phi, const Matrix& sigma);

}  // namespace ptdyn
