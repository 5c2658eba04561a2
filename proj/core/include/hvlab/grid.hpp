#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hvl {

/// Physical conventions shared by the quantum and classical sides of a
/// comparison run.
///
/// kinetic_factor is the coefficient of -hbar^2 Laplacian in the Hamilton
/// operator; force_sign is the sign of the grad(V*rho) . grad_v term in the
/// kinetic transport equation.  The default pair (1/2, -1) is the unique
/// self-consistent choice for which the hbar->0 Wigner flow of the quantum
/// evolution reproduces the v . grad_x transport term.  The literal pair
/// (1, +1) is kept available for side-by-side reproduction.
struct Convention {
  double kinetic_factor = 0.5;  // 1/2 or 1
  int force_sign = -1;          // -1 or +1
  int dimension = 1;            // d >= 1

  void validate() const {
    if (kinetic_factor != 0.5 && kinetic_factor != 1.0)
      throw std::invalid_argument("Convention: kinetic_factor must be 1/2 or 1");
    if (force_sign != -1 && force_sign != 1)
      throw std::invalid_argument("Convention: force_sign must be -1 or +1");
    if (dimension < 1) throw std::invalid_argument("Convention: dimension must be >= 1");
  }
  bool operator==(const Convention&) const = default;
};

/// Periodic spatial grid on [-L/2, L/2), nodes x_j = -L/2 + j*dx.
struct SpatialGrid {
  double length = 0.0;  // L
  int npoints = 0;      // N_x, power of two

  SpatialGrid() = default;
  SpatialGrid(double L, int nx) : length(L), npoints(nx) {
    if (L <= 0.0) throw std::invalid_argument("SpatialGrid: length must be positive");
    if (nx < 2 || nx % 2 != 0)
      throw std::invalid_argument("SpatialGrid: npoints must be even and >= 2");
  }

  double spacing() const { return length / npoints; }
  double node(int j) const { return -0.5 * length + j * spacing(); }
  /// Fourier wavenumber 2*pi*p/L for FFT bin j (standard wraparound order).
  double wavenumber(int j) const {
    int p = (j <= npoints / 2 - 1) ? j : j - npoints;
    return 2.0 * 3.14159265358979323846 * p / length;
  }
  /// Minimal-image displacement folded into [-L/2, L/2).
  double minimal_image(double dx) const {
    while (dx < -0.5 * length) dx += length;
    while (dx >= 0.5 * length) dx -= length;
    return dx;
  }
  bool operator==(const SpatialGrid&) const = default;
};

/// Phase-space grid: spatial grid times a symmetric velocity grid
/// v_k = -vmax + k*dv, dv = 2*vmax/nv.
struct PhaseGrid {
  SpatialGrid spatial;
  double vmax = 0.0;
  int nv = 0;

  PhaseGrid() = default;
  PhaseGrid(SpatialGrid s, double vm, int n) : spatial(s), vmax(vm), nv(n) {
    if (vm <= 0.0) throw std::invalid_argument("PhaseGrid: vmax must be positive");
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("PhaseGrid: nv must be even and >= 2");
  }

  double vspacing() const { return 2.0 * vmax / nv; }
  double vnode(int k) const { return -vmax + k * vspacing(); }
  bool operator==(const PhaseGrid&) const = default;
};

/// hbar = N^{-1/d}; the inverse of the particle-number normalisation
/// N = hbar^{-d}.
double semiclassical_scaling(std::int64_t n_particles, int dimension);

/// The phase grid induced on the Wigner transform by an operator grid:
/// spatial points doubled (midpoint grid, spacing dx/2), velocity spacing
/// pi*hbar/L over 2*N_x bins, extent pi*hbar*N_x/L.
PhaseGrid wigner_induced_grid(const SpatialGrid& g, double hbar);

}  // namespace hvl
