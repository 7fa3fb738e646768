#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ptdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex imag_unit{0.0, 1.0};

/// (A + A^H)/2, the Hermitian part of a square matrix.
inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double hermiticity_defect(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest singular value. Frobenius norms go through Eigen's .norm().
double spectral_norm(const Matrix& a);

enum class NormKind { Spectral, Frobenius };

double matrix_norm(const Matrix& a, NormKind kind);

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& msg, int iterations, double best_residual)
      : std::runtime_error(msg), iterations(iterations), best_residual(best_residual) {}
  int iterations;
  double best_residual;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ptdyn
