#pragma once

#include <random>

#include "ptdyn/model.hpp"

namespace ptdyn::testing {

/// Seeded dense Hermitian test model H(t) = H0 + sin(t) H1; desk-scale stand-in
/// for oracle comparisons where the lattice structure is irrelevant.
class RandomHermitianModel final : public HamiltonianModel {
public:
  RandomHermitianModel(int dim, unsigned seed, double amplitude = 1.0)
      : dim_(dim) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    const auto draw = [&] {
      Matrix m(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(gen), dist(gen));
      Matrix h = hermitize(m);
      return (h / spectral_norm(h)).eval();  // unit spectral norm
    };
    h0_ = draw();
    h1_ = amplitude * draw();
  }

  int dimension() const override { return dim_; }
  bool density_dependent() const override { return false; }
  Matrix base_matrix(double t) const override { return h0_ + std::sin(t) * h1_; }
  Matrix time_derivative(double t) const override { return std::cos(t) * h1_; }
  Matrix second_time_derivative(double t) const override {
    return -std::sin(t) * h1_;
  }

  const Matrix& h0() const { return h0_; }
  const Matrix& h1() const { return h1_; }

private:
  int dim_;
  Matrix h0_, h1_;
};

/// Time-independent variant, eigen-decomposable for stationarity checks.
class StaticHermitianModel final : public HamiltonianModel {
public:
  explicit StaticHermitianModel(Matrix h) : h_(hermitize(std::move(h))) {}

  int dimension() const override { return static_cast<int>(h_.rows()); }
  bool density_dependent() const override { return false; }
  Matrix base_matrix(double) const override { return h_; }
  Matrix time_derivative(double) const override {
    return Matrix::Zero(h_.rows(), h_.cols());
  }
  Matrix second_time_derivative(double) const override {
    return Matrix::Zero(h_.rows(), h_.cols());
  }

private:
  Matrix h_;
};

inline Matrix random_complex(int rows, int cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
  return m;
}

inline Matrix random_hermitian(int dim, unsigned seed) {
  return hermitize(random_complex(dim, dim, seed));
}

inline Matrix random_orthonormal(int rows, int cols, unsigned seed) {
  const Matrix m = random_complex(rows, cols, seed);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

/// Low-rank initial data from a seeded draw: orthonormal phi0 and occupations
/// in (0, 1].
inline LowRankInit random_init(int n_grid, int rank, unsigned seed) {
  LowRankInit init;
  init.rank = rank;
  init.phi0 = random_orthonormal(n_grid, rank, seed);
  std::mt19937 gen(seed + 1);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  init.occupations.resize(rank);
  for (int i = 0; i < rank; ++i) init.occupations[i] = dist(gen);
  init.n_electrons = init.occupations.sum();
  init.energies = RealVector::Zero(rank);
  return init;
}

}  // namespace ptdyn::testing
