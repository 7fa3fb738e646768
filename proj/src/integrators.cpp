#include "ptdyn/integrators.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

namespace ptdyn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Real/imaginary vectorization: std::complex stores (re, im) contiguously, so
// copying the raw buffers gives exactly the interleaved layout.
void pack_into(const Matrix& a, double* dst) {
  std::memcpy(dst, a.data(), sizeof(Complex) * a.size());
}

void unpack_from(const double* src, Matrix& a) {
  std::memcpy(static_cast<void*>(a.data()), src, sizeof(Complex) * a.size());
}

Matrix orthonormalized(const Matrix& phi) {
  Eigen::HouseholderQR<Matrix> qr(phi);
  Matrix q = qr.householderQ() * Matrix::Identity(phi.rows(), phi.cols());
  // fix the phase so the cleanup is a pure gauge rotation of each column
  for (int j = 0; j < q.cols(); ++j) {
    const Complex d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Midpoint projector application without forming P: for the Gram matrix
// G = phi_m^H phi_m, P y = phi_m G^{-1} (phi_m^H y). G stays close to the
// identity for converging iterates; a badly conditioned G means the midpoint
// frame collapsed and the step cannot continue.
struct GramSolver {
  Eigen::LLT<Matrix> llt;

  void factor(const Matrix& gram) {
    const double defect = (gram - Matrix::Identity(gram.rows(), gram.cols())).norm();
    if (defect > 0.4) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      const double lmax = es.eigenvalues().maxCoeff();
      if (!(lmin > 0.0) || lmax / lmin > 1e8)
        throw std::runtime_error(
            "pt_im_step: singular midpoint frame (Gram condition > 1e8)");
    }
    llt.compute(gram);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("pt_im_step: Gram factorization failed");
  }
};

}  // namespace

std::pair<PTState, StepReport> pt_im_step(const HamiltonianModel& model,
                                          const PTState& state, double h,
                                          const SolverConfig& cfg) {
  if (!(h > 0.0)) throw std::invalid_argument("pt_im_step: step size must be > 0");
  const auto t0 = Clock::now();
  const Eigen::Index n_g = state.phi.rows();
  const Eigen::Index n = state.phi.cols();
  const double t_mid = state.t + 0.5 * h;
  const Matrix h_base = hermitize(model.base_matrix(t_mid));
  const bool nonlinear = model.density_dependent();

  Matrix phi1(n_g, n), sig1(n, n);
  Matrix phi_mid(n_g, n), sig_mid(n, n), hphi(n_g, n), w(n, n);
  GramSolver gram;
  const Complex ih(0.0, h);

  const auto map = [&](const RealVector& x) -> RealVector {
    unpack_from(x.data(), phi1);
    unpack_from(x.data() + 2 * n_g * n, sig1);
    phi_mid = 0.5 * (state.phi + phi1);
    sig_mid = 0.5 * (state.sigma + sig1);
    gram.factor(phi_mid.adjoint() * phi_mid);
    if (nonlinear) {
      hphi.noalias() = (h_base + model.exchange_matrix(
                            hermitize(phi_mid * sig_mid * phi_mid.adjoint()))) *
                       phi_mid;
    } else {
      hphi.noalias() = h_base * phi_mid;
    }
    w.noalias() = phi_mid.adjoint() * hphi;
    phi1 = state.phi - ih * (hphi - phi_mid * gram.llt.solve(w));
    sig1 = state.sigma - ih * (w * sig_mid - sig_mid * w);
    RealVector out(x.size());
    pack_into(phi1, out.data());
    pack_into(sig1, out.data() + 2 * n_g * n);
    return out;
  };

  RealVector x0(2 * (n_g * n + n * n));
  pack_into(state.phi, x0.data());
  pack_into(state.sigma, x0.data() + 2 * n_g * n);

  SolveReport solve;
  const RealVector x = anderson_solve(map, std::move(x0), cfg, &solve);

  PTState next;
  next.t = state.t + h;
  next.phi.resize(n_g, n);
  next.sigma.resize(n, n);
  unpack_from(x.data(), next.phi);
  unpack_from(x.data() + 2 * n_g * n, next.sigma);
  next.sigma = hermitize(next.sigma);
  if (cfg.orthonormalize) next.phi = orthonormalized(next.phi);

  StepReport report;
  report.iterations = solve.iterations;
  report.residual = solve.residual;
  report.converged = solve.converged;
  report.ortho_defect =
      (next.phi.adjoint() * next.phi - Matrix::Identity(n, n)).norm();
  report.wall_time = seconds_since(t0);
  return {std::move(next), report};
}

std::pair<SDState, StepReport> sd_im_step(const HamiltonianModel& model,
                                          const SDState& state, double h,
                                          const SolverConfig& cfg) {
  if (!(h > 0.0)) throw std::invalid_argument("sd_im_step: step size must be > 0");
  const auto t0 = Clock::now();
  const Eigen::Index n_g = state.psi.rows();
  const Eigen::Index n = state.psi.cols();
  const double t_mid = state.t + 0.5 * h;
  const Matrix h_base = hermitize(model.base_matrix(t_mid));
  const bool nonlinear = model.density_dependent();
  const Matrix sigma0 = state.occ0.cast<Complex>().asDiagonal();
  const Complex ih(0.0, h);

  Matrix psi1(n_g, n), psi_mid(n_g, n);

  const auto map = [&](const RealVector& x) -> RealVector {
    unpack_from(x.data(), psi1);
    psi_mid = 0.5 * (state.psi + psi1);
    if (nonlinear) {
      psi1 = state.psi -
             ih * ((h_base + model.exchange_matrix(hermitize(
                                 psi_mid * sigma0 * psi_mid.adjoint()))) *
                   psi_mid);
    } else {
      psi1 = state.psi - ih * (h_base * psi_mid);
    }
    RealVector out(x.size());
    pack_into(psi1, out.data());
    return out;
  };

  RealVector x0(2 * n_g * n);
  pack_into(state.psi, x0.data());

  SolveReport solve;
  const RealVector x = anderson_solve(map, std::move(x0), cfg, &solve);

  SDState next;
  next.t = state.t + h;
  next.occ0 = state.occ0;
  next.psi.resize(n_g, n);
  unpack_from(x.data(), next.psi);
  if (cfg.orthonormalize) next.psi = orthonormalized(next.psi);

  StepReport report;
  report.iterations = solve.iterations;
  report.residual = solve.residual;
  report.converged = solve.converged;
  report.ortho_defect =
      (next.psi.adjoint() * next.psi - Matrix::Identity(n, n)).norm();
  report.wall_time = seconds_since(t0);
  return {std::move(next), report};
}

Matrix rk4_dense_step(const HamiltonianModel& model, double t, const Matrix& rho,
                      double h) {
  const auto rhs = [&](double tt, const Matrix& r) -> Matrix {
    const Matrix hm = model.density_dependent() ? model.assemble(tt, hermitize(r))
                                                : model.assemble(tt);
    return -imag_unit * (hm * r - r * hm);
  };
  const Matrix k1 = rhs(t, rho);
  const Matrix k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
  const Matrix k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
  const Matrix k4 = rhs(t + h, rho + h * k3);
  Matrix out = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite())
    throw std::runtime_error("rk4_dense_step: non-finite intermediate");
  return hermitize(out);
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PTIM: return "pt";
    case Scheme::SDIM: return "sd";
    case Scheme::RK4Dense: return "dense";
  }
  return "?";
}

Matrix StateSample::dense(const Scheme scheme) const {
  if (scheme == Scheme::RK4Dense) return density;
  return dense_density(orbitals, occupation);
}

Trajectory propagate(const HamiltonianModel& model, const LowRankInit& init,
                     Scheme scheme, double h, double t_final, int sample_every,
                     const SolverConfig& cfg) {
  if (sample_every < 1)
    throw std::invalid_argument("propagate: sample_every must be >= 1");
  long long n_steps = 0;
  if (t_final > 0.0) {
    if (!(h > 0.0)) throw std::invalid_argument("propagate: step size must be > 0");
    n_steps = std::llround(t_final / h);
    if (n_steps > 1000000000LL)
      throw std::invalid_argument("propagate: more than 1e9 steps requested");
    if (std::abs(n_steps * h - t_final) > 1e-9 * std::max(1.0, t_final))
      throw std::invalid_argument("propagate: t_final is not a multiple of h");
  } else if (t_final < 0.0) {
    throw std::invalid_argument("propagate: t_final must be >= 0");
  }

  Trajectory traj;
  traj.scheme = scheme;
  traj.n_grid = static_cast<int>(init.phi0.rows());
  traj.rank = init.rank;
  traj.step_size = h;
  traj.initial_occupation = init.occupations;
  traj.reports.reserve(static_cast<std::size_t>(n_steps));

  const Matrix sigma0 = init.sigma0();
  PTState pt{0.0, init.phi0, sigma0};
  SDState sd{0.0, init.phi0, init.occupations};
  Matrix rho;
  if (scheme == Scheme::RK4Dense) rho = dense_density(init.phi0, sigma0);

  const auto push_sample = [&](long long step) {
    StateSample s;
    s.t = step * h;
    switch (scheme) {
      case Scheme::PTIM:
        s.orbitals = pt.phi;
        s.occupation = pt.sigma;
        break;
      case Scheme::SDIM:
        s.orbitals = sd.psi;
        s.occupation = sigma0;
        break;
      case Scheme::RK4Dense:
        s.density = rho;
        break;
    }
    traj.samples.push_back(std::move(s));
  };

  push_sample(0);
  for (long long step = 0; step < n_steps; ++step) {
    const double t = step * h;
    try {
      switch (scheme) {
        case Scheme::PTIM: {
          auto [next, report] = pt_im_step(model, pt, h, cfg);
          pt = std::move(next);
          traj.reports.push_back(report);
          break;
        }
        case Scheme::SDIM: {
          auto [next, report] = sd_im_step(model, sd, h, cfg);
          sd = std::move(next);
          traj.reports.push_back(report);
          break;
        }
        case Scheme::RK4Dense: {
          const auto t0 = Clock::now();
          rho = rk4_dense_step(model, t, rho, h);
          StepReport report;
          report.iterations = 1;
          report.converged = true;
          report.wall_time = seconds_since(t0);
          traj.reports.push_back(report);
          break;
        }
      }
    } catch (const std::exception& e) {
      std::ostringstream oss;
      oss << "propagate: step " << step + 1 << " (t = " << t << ") failed: "
          << e.what();
      throw PropagationError(oss.str(), static_cast<std::size_t>(step + 1),
                             std::move(traj));
    }
    if ((step + 1) % sample_every == 0 || step + 1 == n_steps) push_sample(step + 1);
  }
  return traj;
}

}  // namespace ptdyn
