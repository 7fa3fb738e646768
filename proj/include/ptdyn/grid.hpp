#pragma once

#include "ptdyn/types.hpp"

namespace ptdyn {

/// Equidistant periodic grid on [0, 2*pi*cells).
struct Grid1D {
  int cells = 0;            // number of unit cells L
  int points_per_cell = 0;  // m
  int n_points = 0;         // N_g = L*m
  RealVector coords;        // x_j = 2*pi*cells*j/N_g
  double dx = 0.0;          // quadrature weight, dx*N_g = 2*pi*cells

  double length() const { return 2.0 * EIGEN_PI * cells; }
};

/// Throws std::invalid_argument for cells < 1, points_per_cell < 4, or overflow.
Grid1D build_grid(int cells, int points_per_cell);

}  // namespace ptdyn
