#include "ptdyn/dynamics.hpp"

namespace ptdyn {

Matrix rhs_von_neumann(const HamiltonianModel& model, double t, const Matrix& rho) {
  const Matrix h = model.density_dependent() ? model.assemble(t, rho)
                                             : model.assemble(t);
  return hermitize(-imag_unit * (h * rho - rho * h));
}

PTDerivative rhs_pt(const HamiltonianModel& model, const PTState& state) {
  const Matrix h = model.assemble_low_rank(state.t, state.phi, state.sigma);
  const Matrix hphi = h * state.phi;
  const Matrix w = state.phi.adjoint() * hphi;  // phi^H H phi
  PTDerivative d;
  d.dphi = -imag_unit * (hphi - state.phi * w);
  d.dsigma = -imag_unit * (w * state.sigma - state.sigma * w);
  if (!d.dphi.allFinite() || !d.dsigma.allFinite())
    throw std::runtime_error("rhs_pt: non-finite derivative");
  return d;
}

Matrix rhs_sd(const HamiltonianModel& model, const SDState& state) {
  const Matrix sigma0 = state.occ0.cast<Complex>().asDiagonal();
  const Matrix h = model.assemble_low_rank(state.t, state.psi, sigma0);
  Matrix d = -imag_unit * (h * state.psi);
  if (!d.allFinite()) throw std::runtime_error("rhs_sd: non-finite derivative");
  return d;
}

PTDerivative rhs_gauge(const HamiltonianModel& model, double t, const Matrix& phi,
                       const Matrix& sigma, const Matrix& gauge) {
  if (gauge.rows() != phi.rows() || gauge.cols() != phi.rows())
    throw std::invalid_argument("rhs_gauge: gauge has wrong shape");
  if (hermiticity_defect(gauge) > 1e-10)
    throw std::invalid_argument("rhs_gauge: gauge matrix is not Hermitian");
  const Matrix h = model.assemble_low_rank(t, phi, sigma);
  const Matrix hphi = h * phi;
  const Matrix gphi = gauge * phi;
  const Matrix w = phi.adjoint() * hphi;
  const Matrix wg = phi.adjoint() * gphi;
  PTDerivative d;
  d.dphi = -imag_unit * (hphi - phi * w + phi * wg);
  const Matrix diff = w - wg;  // phi^H (H - G) phi
  d.dsigma = -imag_unit * (diff * sigma - sigma * diff);
  return d;
}

}  // namespace ptdyn
