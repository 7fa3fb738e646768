#pragma once

#include "ptdyn/model.hpp"
#include "ptdyn/types.hpp"

namespace ptdyn {

/// State of the parallel-transport dynamics: rho(t) = phi sigma phi^H.
struct PTState {
  double t = 0.0;
  Matrix phi;    // N_g x N, orthonormal columns
  Matrix sigma;  // N x N Hermitian
};

/// State of the Schroedinger-gauge dynamics; the occupation stays frozen.
struct SDState {
  double t = 0.0;
  Matrix psi;      // N_g x N, orthonormal columns
  RealVector occ0;  // frozen initial occupations
};

struct PTDerivative {
  Matrix dphi;
  Matrix dsigma;
};

/// rho_dot = -i [H(t, rho), rho]; the result is Hermitian and traceless.
Matrix rhs_von_neumann(const HamiltonianModel& model, double t, const Matrix& rho);

/// dphi = -i (I - P) H phi, dsigma = -i [phi^H H phi, sigma], P = phi phi^H.
/// Tangency phi^H dphi = 0 holds by construction.
PTDerivative rhs_pt(const HamiltonianModel& model, const PTState& state);

/// dpsi = -i H(t, psi occ0 psi^H) psi.
Matrix rhs_sd(const HamiltonianModel& model, const SDState& state);

/// Generic gauge G (Hermitian):
///   dphi = -i [(I - P) H phi + P G phi],
///   dsigma = -i [phi^H (H - G) phi, sigma].
/// G = 0 recovers rhs_pt, G = H the Schroedinger gauge.
PTDerivative rhs_gauge(const HamiltonianModel& model, double t, const Matrix& phi,
                       const Matrix& sigma, const Matrix& gauge);

}  // namespace ptdyn
