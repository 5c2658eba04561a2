#include "hvlab/grid.hpp"

#include <cmath>

namespace hvl {

double semiclassical_scaling(std::int64_t n_particles, int dimension) {
  if (n_particles < 1) throw std::invalid_argument("semiclassical_scaling: N must be >= 1");
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("semiclassical_scaling: d must be in {1,2,3}");
  return std::pow(static_cast<double>(n_particles), -1.0 / dimension);
}

PhaseGrid wigner_induced_grid(const SpatialGrid& g, double hbar) {
  if (hbar <= 0.0) throw std::invalid_argument("wigner_induced_grid: hbar must be positive");
  const double pi = 3.14159265358979323846;
  // Doubled in both directions relative to the operator grid: midpoints
  // (x_i + x_j)/2 live on the half-spaced grid and the velocity spectrum of
  // the relative coordinate spans 2 N_x bins of width pi*hbar/L.  This is
  // the unique grid on which the operator <-> field maps invert exactly.
  const SpatialGrid half(g.length, 2 * g.npoints);
  const double vmax = pi * hbar * g.npoints / g.length;
  return PhaseGrid(half, vmax, 2 * g.npoints);
}

}  // namespace hvl
