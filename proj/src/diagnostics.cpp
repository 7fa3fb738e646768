#include "ptdyn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ptdyn {

namespace {

constexpr double kTimeMatchTol = 1e-9;

// indices of samples whose times coincide, numeric first
std::vector<std::pair<std::size_t, std::size_t>> shared_samples(
    const Trajectory& a, const Trajectory& b) {
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    while (j < b.samples.size() && b.samples[j].t < a.samples[i].t - kTimeMatchTol)
      ++j;
    if (j < b.samples.size() && std::abs(b.samples[j].t - a.samples[i].t) <= kTimeMatchTol)
      shared.emplace_back(i, j);
  }
  return shared;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

double relative_error(const Trajectory& numeric, const Trajectory& reference,
                      Quantity quantity, NormKind norm) {
  const auto shared = shared_samples(numeric, reference);
  if (shared.empty())
    throw std::invalid_argument("relative_error: trajectories share no sample times");
  double sup = 0.0;
  for (const auto& [i, j] : shared) {
    const StateSample& sn = numeric.samples[i];
    const StateSample& sr = reference.samples[j];
    Matrix diff, ref;
    switch (quantity) {
      case Quantity::Phi:
      case Quantity::Psi:
        diff = sn.orbitals - sr.orbitals;
        ref = sr.orbitals;
        break;
      case Quantity::Sigma:
        diff = sn.occupation - sr.occupation;
        ref = sr.occupation;
        break;
      case Quantity::Rho: {
        const Matrix rho_n = sn.dense(numeric.scheme);
        const Matrix rho_r = sr.dense(reference.scheme);
        diff = rho_n - rho_r;
        ref = rho_r;
        break;
      }
    }
    sup = std::max(sup, matrix_norm(diff, norm) / matrix_norm(ref, norm));
  }
  return sup;
}

double dipole_moment(const Grid1D& grid, const Matrix& phi, const Matrix& sigma) {
  const Matrix phi_sigma = phi * sigma;
  double s = 0.0;
  for (Eigen::Index j = 0; j < phi.rows(); ++j)
    s += grid.coords[j] * phi_sigma.row(j).dot(phi.row(j)).real();
  return s;
}

double dipole_moment(const Grid1D& grid, const Matrix& rho) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < rho.rows(); ++j)
    s += grid.coords[j] * rho(j, j).real();
  return s;
}

double dipole_moment(const Grid1D& grid, const StateSample& sample, Scheme scheme) {
  if (scheme == Scheme::RK4Dense) return dipole_moment(grid, sample.density);
  return dipole_moment(grid, sample.orbitals, sample.occupation);
}

ConservationSeries conservation_report(const Trajectory& traj) {
  ConservationSeries series;
  series.t.reserve(traj.samples.size());
  for (const StateSample& s : traj.samples) {
    series.t.push_back(s.t);
    if (traj.scheme == Scheme::RK4Dense) {
      series.ortho_defect.push_back((s.density - s.density.adjoint()).norm());
      series.tr_sigma.push_back(s.density.trace().real());
      series.tr_sigma2.push_back((s.density * s.density).trace().real());
      series.tr_sigma3.push_back((s.density * s.density * s.density).trace().real());
      continue;
    }
    const Matrix& sig = s.occupation;
    const Eigen::Index n = s.orbitals.cols();
    series.ortho_defect.push_back(
        (s.orbitals.adjoint() * s.orbitals - Matrix::Identity(n, n)).norm());
    series.tr_sigma.push_back(sig.trace().real());
    series.tr_sigma2.push_back((sig * sig).trace().real());
    series.tr_sigma3.push_back((sig * sig * sig).trace().real());
  }
  return series;
}

double BoundSample::projector_aggregate() const {
  return projector_terms[2] + 2.0 * projector_terms[4] + projector_terms[5] +
         projector_terms[6];
}

double BoundSample::density_aggregate() const {
  return density_terms[2] + 2.0 * density_terms[4] + density_terms[5] +
         density_terms[6];
}

double BoundSample::wavefunction_aggregate() const {
  return wavefunction_terms[0] + wavefunction_terms[1] +
         2.0 * wavefunction_terms[2] + wavefunction_terms[3];
}

double BoundReport::projector_aggregate_h2() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.projector_aggregate());
  return m * h * h;
}

double BoundReport::density_aggregate_h2() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.density_aggregate());
  return m * h * h;
}

double BoundReport::wavefunction_aggregate_h2() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.wavefunction_aggregate());
  return m * h * h;
}

double BoundReport::h3psi_h2() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.wavefunction_terms[0]);
  return m * h * h;
}

namespace {

BoundSample bound_sample(const HamiltonianModel& model, double t, const Matrix& phi,
                         const Matrix& sigma) {
  BoundSample out;
  out.t = t;
  const Matrix h = model.assemble(t);
  const Matrix ht = hermitize(model.time_derivative(t));
  const Matrix htt = hermitize(model.second_time_derivative(t));
  const Matrix p = hermitize(phi * phi.adjoint());
  const Matrix rho = dense_density(phi, sigma);

  const auto fill = [&](const Matrix& x, std::array<double, 7>& terms) {
    const Matrix hx = commutator(h, x);
    const Matrix htx = commutator(ht, x);
    terms[0] = spectral_norm(hx);
    terms[1] = spectral_norm(htx);
    terms[2] = spectral_norm(commutator(htt, x));
    const Matrix hhx = commutator(h, hx);
    terms[3] = spectral_norm(hhx);
    terms[4] = spectral_norm(commutator(ht, hx));
    terms[5] = spectral_norm(commutator(h, htx));
    terms[6] = spectral_norm(commutator(h, hhx));
  };
  fill(p, out.projector_terms);
  fill(rho, out.density_terms);

  // ||H^3 psi|| etc. are gauge invariant: psi = phi U with unitary U leaves
  // the norms unchanged, so the PT orbitals can stand in for psi.
  const Matrix hphi = h * phi;
  const Matrix h2phi = h * hphi;
  out.wavefunction_terms[0] = spectral_norm(h * h2phi);
  out.wavefunction_terms[1] = spectral_norm(h * (ht * phi));
  out.wavefunction_terms[2] = spectral_norm(ht * hphi);
  out.wavefunction_terms[3] = spectral_norm(htt * phi);
  return out;
}

}  // namespace

BoundReport commutator_bounds(const HamiltonianModel& model, const Trajectory& traj,
                              double h) {
  if (model.density_dependent())
    throw std::invalid_argument(
        "commutator_bounds: density-dependent model; the H_rho and H_rhorho "
        "terms of the bounds are not evaluated here");
  if (traj.scheme == Scheme::RK4Dense)
    throw std::invalid_argument("commutator_bounds: needs an orbital trajectory");
  BoundReport report;
  report.h = h;
  report.samples.reserve(traj.samples.size());
  for (const StateSample& s : traj.samples)
    report.samples.push_back(bound_sample(model, s.t, s.orbitals, s.occupation));
  return report;
}

std::vector<OrbitalError> orbital_error_histogram(const Trajectory& numeric,
                                                  const Trajectory& reference,
                                                  const RealVector& energies) {
  if (numeric.scheme != reference.scheme)
    throw std::invalid_argument(
        "orbital_error_histogram: numeric and reference must use the same dynamics");
  const auto shared = shared_samples(numeric, reference);
  if (shared.empty())
    throw std::invalid_argument("orbital_error_histogram: no shared sample times");
  const auto& [i, j] = shared.back();
  const Matrix& a = numeric.samples[i].orbitals;
  const Matrix& b = reference.samples[j].orbitals;
  if (a.cols() != b.cols() || a.cols() != energies.size())
    throw std::invalid_argument("orbital_error_histogram: column count mismatch");
  std::vector<OrbitalError> hist(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    hist[c].energy = energies[c];
    hist[c].error = (a.col(c) - b.col(c)).norm();
  }
  return hist;
}

double convergence_order(const std::vector<double>& step_sizes,
                         const std::vector<double>& errors) {
  if (step_sizes.size() != errors.size())
    throw std::invalid_argument("convergence_order: size mismatch");
  if (step_sizes.size() < 3)
    throw std::invalid_argument("convergence_order: need at least 3 step sizes");
  const std::size_t n = step_sizes.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(step_sizes[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TwoLevelScan two_level_adiabatic_scan(const std::vector<double>& eps_values,
                                      double scale, double delta, double t_final) {
  TwoLevelScan scan;
  const auto hmat = [&](double t) -> Matrix {
    Matrix m(2, 2);
    m << scale * (t - 0.5), scale * delta, scale * delta, -scale * (t - 0.5);
    return m;
  };
  const Matrix ht = (Matrix(2, 2) << scale, 0.0, 0.0, -scale).finished();
  const Matrix htt = Matrix::Zero(2, 2);

  for (const double eps : eps_values) {
    // ground state of H(0), then i eps dpsi/dt = H(t) psi by fine RK4
    Eigen::SelfAdjointEigenSolver<Matrix> es(hmat(0.0));
    Eigen::Vector2cd psi = es.eigenvectors().col(0);
    const double h = 2e-5 * eps;
    const long long n = std::llround(t_final / h);
    const long long stride = std::max(1LL, n / 64);
    const auto rhs = [&](double t, const Eigen::Vector2cd& p) -> Eigen::Vector2cd {
      return (-imag_unit / eps) * (hmat(t) * p);
    };
    double pt_agg = 0.0, sd_agg = 0.0;
    for (long long k = 0; k < n; ++k) {
      const double t = k * h;
      if (k % stride == 0) {
        const Matrix hs = hmat(t) / eps;
        const Matrix hts = ht / eps;
        const Matrix p = psi * psi.adjoint();
        const Matrix chp = commutator(hs, p);
        const Matrix chtp = commutator(hts, p);
        const double pt = 2.0 * spectral_norm(commutator(hts, chp)) +
                          spectral_norm(commutator(hs, chtp)) +
                          spectral_norm(commutator(hs, commutator(hs, chp)));
        const double sd = (hs * hs * (hs * psi)).norm() + (hs * (hts * psi)).norm() +
                          2.0 * (hts * (hs * psi)).norm() + (htt * psi).norm();
        pt_agg = std::max(pt_agg, pt);
        sd_agg = std::max(sd_agg, sd);
      }
      const Eigen::Vector2cd k1 = rhs(t, psi);
      const Eigen::Vector2cd k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
      const Eigen::Vector2cd k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
      const Eigen::Vector2cd k4 = rhs(t + h, psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    scan.eps.push_back(eps);
    scan.pt_aggregate.push_back(pt_agg);
    scan.sd_aggregate.push_back(sd_agg);
  }
  scan.pt_exponent = convergence_order(scan.eps, scan.pt_aggregate);
  scan.sd_exponent = convergence_order(scan.eps, scan.sd_aggregate);
  return scan;
}

}  // namespace ptdyn
