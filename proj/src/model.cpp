#include "ptdyn/model.hpp"

#include <cmath>
#include <sstream>

namespace ptdyn {

namespace {

double fermi_occupation(double energy, double mu, double beta) {
  const double arg = beta * (energy - mu);
  if (arg > 700.0) return 0.0;
  if (arg < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(arg));
}

double total_occupation(const RealVector& energies, double mu, double beta) {
  double s = 0.0;
  for (int i = 0; i < energies.size(); ++i)
    s += fermi_occupation(energies[i], mu, beta);
  return s;
}

// Monotone bisection of sum_i f_beta(eps_i - mu) = target.
double bisect_chemical_potential(const RealVector& energies, double beta,
                                 double target, double tol = 1e-12) {
  double lo = energies.minCoeff() - 50.0 / beta;
  double hi = energies.maxCoeff() + 50.0 / beta;
  if (total_occupation(energies, lo, beta) > target ||
      total_occupation(energies, hi, beta) < target) {
    std::ostringstream oss;
    oss << "fermi_dirac_init: cannot bracket mu for target " << target
        << "; spectrum range [" << energies.minCoeff() << ", "
        << energies.maxCoeff() << "], " << energies.size() << " levels";
    throw std::runtime_error(oss.str());
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (total_occupation(energies, mid, beta) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

LowRankInit init_from_hamiltonian(const Matrix& h0, double beta,
                                  const OccupationTarget& target, int rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("fermi_dirac_init: eigensolver failed");
  const RealVector& energies = es.eigenvalues();  // ascending
  const int n_g = static_cast<int>(energies.size());
  if (rank < 1 || rank >= n_g)
    throw std::invalid_argument("fermi_dirac_init: need 1 <= rank < N_g");

  double mu;
  if (target.kind == OccupationTarget::Kind::ElectronCount) {
    const double ne = target.value;
    if (ne <= 0.0 || ne > rank)
      throw std::invalid_argument("fermi_dirac_init: need 0 < N_e <= rank");
    mu = bisect_chemical_potential(energies, beta, ne);
  } else {
    mu = target.value;
  }

  // Largest occupations are the lowest energies; keep the leading block and
  // readjust mu on it so the truncated trace still matches.
  LowRankInit init;
  init.rank = rank;
  init.beta = beta;
  init.phi0 = es.eigenvectors().leftCols(rank);
  init.energies = energies.head(rank);
  if (target.kind == OccupationTarget::Kind::ElectronCount) {
    mu = bisect_chemical_potential(init.energies, beta, target.value);
  }
  init.mu = mu;
  init.occupations.resize(rank);
  for (int i = 0; i < rank; ++i)
    init.occupations[i] = fermi_occupation(init.energies[i], mu, beta);
  init.n_electrons = init.occupations.sum();
  return init;
}

}  // namespace

Matrix HamiltonianModel::exchange_matrix(const Matrix&) const {
  return Matrix::Zero(dimension(), dimension());
}

Matrix HamiltonianModel::assemble(double t) const {
  if (!std::isfinite(t))
    throw std::invalid_argument("assemble: non-finite time");
  if (density_dependent())
    throw std::invalid_argument("assemble: model requires a density argument");
  return hermitize(base_matrix(t));
}

Matrix HamiltonianModel::assemble(double t, const Matrix& rho) const {
  if (!std::isfinite(t))
    throw std::invalid_argument("assemble: non-finite time");
  if (rho.rows() != dimension() || rho.cols() != dimension())
    throw std::invalid_argument("assemble: density has wrong shape");
  if (hermiticity_defect(rho) > 1e-8)
    throw std::invalid_argument("assemble: density is not Hermitian");
  Matrix h = base_matrix(t);
  if (density_dependent()) h += exchange_matrix(rho);
  return hermitize(h);
}

Matrix HamiltonianModel::assemble_low_rank(double t, const Matrix& phi,
                                           const Matrix& sigma) const {
  if (!density_dependent()) return assemble(t);
  return assemble(t, dense_density(phi, sigma));
}

Matrix kinetic_matrix(const Grid1D& grid, LaplacianScheme scheme) {
  const int n = grid.n_points;
  Matrix k = Matrix::Zero(n, n);
  if (scheme == LaplacianScheme::FiniteDifference2) {
    const double w = 1.0 / (grid.dx * grid.dx);
    for (int j = 0; j < n; ++j) {
      k(j, j) = w;
      k(j, (j + 1) % n) = -0.5 * w;
      k((j + 1) % n, j) = -0.5 * w;
    }
    return k;
  }
  // Circulant built from the plane-wave symbol kappa^2/(2 L^2); the unpaired
  // kappa = N_g/2 mode contributes (-1)^d and keeps the matrix real.
  const double inv2l2 = 1.0 / (2.0 * grid.cells * static_cast<double>(grid.cells));
  RealVector c = RealVector::Zero(n);
  for (int d = 0; d < n; ++d) {
    double s = 0.0;
    for (int kap = 1; kap <= n / 2 - 1; ++kap)
      s += 2.0 * (kap * static_cast<double>(kap)) * inv2l2 *
           std::cos(2.0 * EIGEN_PI * kap * d / static_cast<double>(n));
    const double half = n / 2 * static_cast<double>(n / 2) * inv2l2;
    s += (d % 2 == 0 ? half : -half);
    c[d] = s / n;
  }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) k(j, l) = c[(j - l + n) % n];
  return hermitize(k);
}

LatticeHamiltonian::LatticeHamiltonian(Grid1D grid, ModelParams params)
    : grid_(std::move(grid)), params_(params) {
  kinetic_ = kinetic_matrix(grid_, params_.laplacian);
  const int n = grid_.n_points;
  static_pot_.resize(n);
  drive_profile_.resize(n);
  const bool harmonic = params_.effective_potential() == StaticPotential::Harmonic;
  for (int j = 0; j < n; ++j) {
    const double x = grid_.coords[j];
    static_pot_[j] = harmonic ? x * x : std::cos(x);
    drive_profile_[j] = params_.drive_amplitude * std::sin(x / grid_.cells);
  }
  if (params_.kind == ModelKind::NonlinearYukawa) {
    kernel_.resize(n, n);
    const double pref = 2.0 * EIGEN_PI / (params_.kappa * params_.eps0);
    const double period = grid_.length();
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double d = std::abs(grid_.coords[j] - grid_.coords[l]);
        kernel_(j, l) = pref * std::exp(-params_.kappa * std::min(d, period - d));
      }
  }
}

Matrix LatticeHamiltonian::base_matrix(double t) const {
  Matrix h = kinetic_;
  const double drive = std::sin(params_.drive_frequency * t);
  h.diagonal() += (static_pot_ + drive * drive_profile_).cast<Complex>();
  return h;
}

Matrix LatticeHamiltonian::exchange_matrix(const Matrix& rho) const {
  if (params_.kind != ModelKind::NonlinearYukawa)
    return Matrix::Zero(grid_.n_points, grid_.n_points);
  return (-grid_.dx) * kernel_.cast<Complex>().cwiseProduct(rho);
}

Matrix LatticeHamiltonian::time_derivative(double t) const {
  Matrix h = Matrix::Zero(grid_.n_points, grid_.n_points);
  const double f = params_.drive_frequency * std::cos(params_.drive_frequency * t);
  h.diagonal() = (f * drive_profile_).cast<Complex>();
  return h;
}

Matrix LatticeHamiltonian::second_time_derivative(double t) const {
  Matrix h = Matrix::Zero(grid_.n_points, grid_.n_points);
  const double w = params_.drive_frequency;
  h.diagonal() = (-w * w * std::sin(w * t) * drive_profile_).cast<Complex>();
  return h;
}

LowRankInit fermi_dirac_init(const HamiltonianModel& model, double beta,
                             const OccupationTarget& target, int rank) {
  if (beta <= 0.0) throw std::invalid_argument("fermi_dirac_init: beta must be > 0");
  if (!model.density_dependent())
    return init_from_hamiltonian(model.assemble(0.0), beta, target, rank);

  // Self-consistent ground state: H(0, rho) and the Fermi-Dirac density have
  // to agree. Damped fixed-point loop, mixing factor 0.5.
  const int n = model.dimension();
  Matrix rho = Matrix::Zero(n, n);
  LowRankInit init;
  for (int it = 0; it < 200; ++it) {
    init = init_from_hamiltonian(model.assemble(0.0, rho), beta, target, rank);
    const Matrix rho_new = dense_density(init.phi0, init.sigma0());
    const double delta = (rho_new - rho).norm();
    rho = 0.5 * rho + 0.5 * rho_new;
    if (delta <= 1e-9) return init;
  }
  throw std::runtime_error(
      "fermi_dirac_init: self-consistent loop did not converge in 200 sweeps");
}

Matrix dense_density(const Matrix& phi, const Matrix& sigma) {
  if (phi.cols() != sigma.rows() || sigma.rows() != sigma.cols())
    throw std::invalid_argument("dense_density: shape mismatch");
  return hermitize(phi * sigma * phi.adjoint());
}

}  // namespace ptdyn
