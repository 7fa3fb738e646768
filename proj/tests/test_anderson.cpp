#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ptdyn/anderson.hpp"

using namespace ptdyn;

namespace {

// affine contraction T(x) = A x + b with prescribed spectral radius
struct AffineMap {
  RealMatrix a;
  RealVector b;

  static AffineMap make(int dim, double radius, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    RealMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = dist(gen);
    a = 0.5 * (a + a.transpose()).eval();  // the production Jacobians are normal
    const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
    a *= radius / rho;
    RealVector b(dim);
    for (int i = 0; i < dim; ++i) b[i] = dist(gen);
    return {a, b};
  }

  RealVector operator()(const RealVector& x) const { return a * x + b; }
  RealVector fixed_point() const {
    return (RealMatrix::Identity(a.rows(), a.cols()) - a).lu().solve(b);
  }
};

}  // namespace

TEST_CASE("mixing depth 0 is exactly the damped iteration") {
  const AffineMap map = AffineMap::make(12, 0.8, 5);
  SolverConfig cfg;
  cfg.mixing_depth = 0;
  cfg.damping = 0.37;
  cfg.tol = 1e-12;
  cfg.max_iterations = 400;

  // capture the iterates seen by the solver
  std::vector<RealVector> iterates;
  const FixedPointMap probe = [&](const RealVector& x) {
    iterates.push_back(x);
    return map(x);
  };
  RealVector x0 = RealVector::LinSpaced(12, -1.0, 1.0);
  anderson_solve(probe, x0, cfg);

  // replay by hand: x <- x - alpha (x - T(x))
  RealVector x = x0;
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    CHECK((iterates[k] - x).norm() == 0.0);  // exact algebraic identity
    x = x - cfg.damping * (x - map(x));
  }
}

TEST_CASE("affine contraction converges against the direct-solve oracle") {
  const AffineMap map = AffineMap::make(20, 0.9, 4);
  const RealVector expected = map.fixed_point();
  SolverConfig cfg;  // defaults: depth 5, damping 0.5, tol 1e-10
  SolveReport report;
  const RealVector x = anderson_solve([&](const RealVector& v) { return map(v); },
                                      RealVector::Zero(20), cfg, &report);
  CHECK(report.converged);
  CHECK(report.iterations <= 50);
  CHECK((x - expected).norm() / expected.norm() < 1e-8);
}

TEST_CASE("identity map returns the start after one evaluation") {
  SolverConfig cfg;
  SolveReport report;
  int calls = 0;
  const RealVector x0 = RealVector::Constant(7, 3.25);
  const RealVector x = anderson_solve(
      [&](const RealVector& v) {
        ++calls;
        return v;
      },
      x0, cfg, &report);
  CHECK(calls == 1);
  CHECK(report.iterations == 1);
  CHECK((x - x0).norm() == 0.0);
}

TEST_CASE("non-convergence raises with the best residual attached") {
  SolverConfig cfg;
  cfg.max_iterations = 8;
  cfg.mixing_depth = 0;
  cfg.damping = 1e-3;
  try {
    anderson_solve([](const RealVector& v) { return 2.0 * v; },
                   RealVector::Constant(4, 1.0), cfg);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.iterations == 8);
    CHECK(e.best_residual > 0.0);
    CHECK(std::isfinite(e.best_residual));
  }
}

TEST_CASE("NaN from the map raises immediately") {
  SolverConfig cfg;
  CHECK_THROWS_AS(anderson_solve(
                      [](const RealVector& v) {
                        RealVector out = v;
                        out[0] = std::nan("");
                        return out;
                      },
                      RealVector::Constant(3, 1.0), cfg),
                  SolverError);
}

TEST_CASE("history window accelerates a slow contraction") {
  // spectral radius 0.97: damped-only convergence is impractically slow,
  // the windowed update should still get there quickly
  const AffineMap map = AffineMap::make(30, 0.97, 23);
  SolverConfig cfg;
  cfg.mixing_depth = 10;
  cfg.max_iterations = 100;
  SolveReport report;
  const RealVector x = anderson_solve([&](const RealVector& v) { return map(v); },
                                      RealVector::Zero(30), cfg, &report);
  CHECK(report.converged);
  CHECK((x - map.fixed_point()).norm() < 1e-7);
}
