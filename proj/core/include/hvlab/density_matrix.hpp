#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvlab/config.hpp"
#include "hvlab/grid.hpp"
#include "hvlab/phase_field.hpp"

namespace hvl {

/// One-particle operator on the spatial grid.  The stored matrix folds the
/// quadrature weight in, M = kernel * dx^d, so operator products and traces
/// are plain matrix products and traces.
struct DensityMatrix {
  SpatialGrid grid;  // per-axis grid; matrix dimension is npoints^dimension
  int dimension = 1;
  double hbar = 1.0;
  std::int64_t n_particles = 1;
  Eigen::MatrixXcd m;

  int size() const { return static_cast<int>(m.rows()); }
  double weight() const {
    double w = 1.0;
    for (int i = 0; i < dimension; ++i) w *= grid.spacing();
    return w;
  }
  double trace() const { return m.trace().real(); }
  /// Coordinate of flattened node index along one axis (row-major nesting,
  /// axis 0 outermost).
  double coordinate(int flat, int axis) const;
  double hermiticity_defect() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

  /// kernel value omega(x_i; x_j) (weight removed)
  std::complex<double> kernel(int i, int j) const { return m(i, j) / weight(); }
};

/// rho(x_j) = omega(x_j; x_j) / N, so that sum rho dx^d = tr omega / N = 1.
Eigen::VectorXd spatial_density(const DensityMatrix& w);

/// Sum of absolute eigenvalues of M1 - M2 (both Hermitian on the same grid).
double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b);

struct CommutatorDensity {
  Eigen::VectorXd rho_abs;  // diagonal of |[x_axis, omega]| in kernel convention
  double l1 = 0.0;
  double linf = 0.0;
  bool locality_warning = false;
};

/// Densities of the absolute commutator with the coordinate operator.
/// minimal_image folds the coordinate difference periodically; the default
/// uses the literal coordinate on [-L/2, L/2) and attaches a warning when the
/// state touches the boundary.
CommutatorDensity commutator_density(const DensityMatrix& w, int axis, bool minimal_image = false);

/// Second-order Taylor defect of the mean-field potential times the state:
/// kernel [U(x) - U(y) - U'((x+y)/2)(x - y)] omega(x;y).  Anti-Hermitian.
/// The midpoint gradient is Fourier-interpolated onto the half-spaced grid.
DensityMatrix remainder_operator(const DensityMatrix& w, const Eigen::VectorXd& u);

/// Trace norm of the (anti-Hermitian) remainder operator.
double remainder_trace_norm(const DensityMatrix& b);

/// One Strang step of the mean-field evolution: half kinetic conjugation,
/// full potential conjugation with U frozen from the half-stepped density,
/// half kinetic conjugation.  kernel is the periodized potential column.
/// With exchange on, the potential-step generator is U - X with
/// X(x;y) = V(x-y) omega(x;y) / N, exponentiated by eigendecomposition.
DensityMatrix hartree_step(const DensityMatrix& w, double dt, const Eigen::VectorXd& kernel,
                           const Convention& conv, bool with_exchange = false,
                           std::vector<std::string>* warnings = nullptr);

/// E = kinetic_factor hbar^2 tr(-Laplacian omega) + (N/2) int int V(x-y) rho(x) rho(y).
double hartree_energy(const DensityMatrix& w, const Eigen::VectorXd& kernel,
                      const Convention& conv);

/// Smallest and largest eigenvalue of the state.
std::pair<double, double> spectral_range(const DensityMatrix& w);

/// Total spectral mass outside the fermionic band [0, 1].
double fermionic_defect(const DensityMatrix& w);

/// Normalized phase-space profile on the Wigner-induced grid (the shared
/// initial datum of a comparison run).
PhaseSpaceField initial_field(const InitialSpec& spec, const SpatialGrid& grid, double hbar);

/// Mixed state from a phase-space profile: exact Weyl quantization of the
/// profile, trace renormalized to N.  The spectrum is checked against the
/// fermionic band [0, 1]; the total excursion (mass outside the band) is
/// reported through eps_clip and the construction fails when it exceeds
/// 1e-3 of N.  Eigenvalues are not clipped: clipping would break the exact
/// identity weyl(W_0) = omega_0 that the comparison monitors rely on.
/// d = 1 directly; d = 3 as a product of identical 1D factors.
DensityMatrix build_mixed_state(const InitialSpec& spec, const RunContext& ctx,
                                double* eps_clip = nullptr);

}  // namespace hvl
