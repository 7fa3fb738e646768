#include "ptdyn/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptdyn {

namespace {

// Sliding window of iterate/residual differences with an incrementally
// maintained Gram matrix Y^T Y.
class HistoryWindow {
public:
  HistoryWindow(Eigen::Index dim, int capacity)
      : s_(dim, std::max(capacity, 1)), y_(dim, std::max(capacity, 1)),
        gram_(std::max(capacity, 1), std::max(capacity, 1)), capacity_(capacity) {}

  int size() const { return size_; }
  void clear() { size_ = 0; }

  void push(const RealVector& s, const RealVector& y) {
    if (capacity_ == 0) return;
    if (size_ == capacity_) drop_oldest();
    s_.col(size_) = s;
    y_.col(size_) = y;
    for (int j = 0; j <= size_; ++j) {
      const double g = y_.col(j).dot(y_.col(size_));
      gram_(j, size_) = g;
      gram_(size_, j) = g;
    }
    ++size_;
  }

  void drop_oldest() {
    if (size_ == 0) return;
    for (int j = 1; j < size_; ++j) {
      s_.col(j - 1) = s_.col(j);
      y_.col(j - 1) = y_.col(j);
    }
    gram_.topLeftCorner(size_ - 1, size_ - 1) =
        gram_.block(1, 1, size_ - 1, size_ - 1).eval();
    --size_;
  }

  // gamma = Y^+ r via Tikhonov-regularized normal equations, the factor
  // scaled by the Gram trace so it stays meaningful as residuals shrink.
  // A numerically rank-deficient window drops its oldest column first.
  RealVector solve_gamma(const RealVector& r, double regularization) {
    while (size_ > 1) {
      const auto g = gram_.topLeftCorner(size_, size_);
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
      const double lmax = es.eigenvalues().maxCoeff();
      const double lmin = es.eigenvalues().minCoeff();
      if (lmin > 1e-14 * std::max(lmax, 0.0)) break;
      drop_oldest();
    }
    const int w = size_;
    RealMatrix g = gram_.topLeftCorner(w, w);
    if (!(g.trace() > 0.0)) return RealVector::Zero(w);
    g.diagonal().array() += regularization * g.trace();
    const RealVector rhs = y_.leftCols(w).transpose() * r;
    return g.ldlt().solve(rhs);
  }

  const RealMatrix& s() const { return s_; }
  const RealMatrix& y() const { return y_; }

private:
  RealMatrix s_, y_;
  RealMatrix gram_;
  int capacity_ = 0;
  int size_ = 0;
};

}  // namespace

RealVector anderson_solve(const FixedPointMap& map, RealVector x0,
                          const SolverConfig& cfg, SolveReport* report) {
  if (cfg.mixing_depth < 0 || cfg.damping <= 0.0 || cfg.damping > 1.0 ||
      cfg.tol <= 0.0 || cfg.max_iterations < 1)
    throw std::invalid_argument("anderson_solve: invalid solver configuration");
  if (!x0.allFinite())
    throw SolverError("anderson_solve: non-finite initial guess", 0,
                      std::numeric_limits<double>::infinity());

  // Window of ell+1 difference columns as in the update rule; mixing depth 0
  // disables the history and leaves the plain damped iteration.
  const int capacity = cfg.mixing_depth > 0 ? cfg.mixing_depth + 1 : 0;
  HistoryWindow history(x0.size(), capacity);

  RealVector x = std::move(x0);
  RealVector x_prev, r_prev;
  RealVector r(x.size()), tx(x.size());
  double alpha = cfg.damping;
  double best = std::numeric_limits<double>::infinity();

  for (int k = 0; k < cfg.max_iterations; ++k) {
    tx = map(x);
    if (!tx.allFinite())
      throw SolverError("anderson_solve: map returned non-finite values", k + 1, best);
    r = x - tx;
    const double rel = r.norm() / std::max(x.norm(), 1.0);
    if (report) {
      report->iterations = k + 1;
      report->residual = rel;
    }
    if (rel <= cfg.tol) {
      if (report) report->converged = true;
      return x;
    }
    if (rel > 4.0 * best) {
      // runaway: forget the (stale) window and damp harder
      history.clear();
      alpha = std::max(0.5 * alpha, cfg.damping / 64.0);
      x_prev.resize(0);
    }
    best = std::min(best, rel);

    if (x_prev.size() > 0) history.push(x - x_prev, r - r_prev);
    x_prev = x;
    r_prev = r;

    if (history.size() == 0) {
      x -= alpha * r;
    } else {
      const RealVector gamma = history.solve_gamma(r, cfg.regularization);
      const int w = history.size();
      x -= alpha * (r - history.y().leftCols(w) * gamma) +
           history.s().leftCols(w) * gamma;
    }
  }

  std::ostringstream oss;
  oss << "anderson_solve: no convergence after " << cfg.max_iterations
      << " iterations (best residual " << best << ", tol " << cfg.tol << ")";
  throw SolverError(oss.str(), cfg.max_iterations, best);
}

}  // namespace ptdyn
