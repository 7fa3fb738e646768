#include "ptdyn/grid.hpp"

#include <limits>

namespace ptdyn {

Grid1D build_grid(int cells, int points_per_cell) {
  if (cells < 1) throw std::invalid_argument("build_grid: cells must be >= 1");
  if (points_per_cell < 4)
    throw std::invalid_argument("build_grid: points_per_cell must be >= 4");
  const long long n = static_cast<long long>(cells) * points_per_cell;
  if (n > std::numeric_limits<int>::max())
    throw std::invalid_argument("build_grid: cells*points_per_cell overflows");

  Grid1D g;
  g.cells = cells;
  g.points_per_cell = points_per_cell;
  g.n_points = static_cast<int>(n);
  g.dx = 2.0 * EIGEN_PI * cells / static_cast<double>(g.n_points);
  g.coords.resize(g.n_points);
  for (int j = 0; j < g.n_points; ++j)
    g.coords[j] = 2.0 * EIGEN_PI * cells * j / static_cast<double>(g.n_points);
  return g;
}

}  // namespace ptdyn
