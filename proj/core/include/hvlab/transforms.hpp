#pragma once

#include "hvlab/density_matrix.hpp"
#include "hvlab/phase_field.hpp"

namespace hvl {

/// Wigner transform of a 1D operator onto its induced phase grid (midpoint
/// centers on the half-spaced grid, velocity spacing pi*hbar/L):
///   W(x, v) = (1/2pi) int omega(x + s/2; x - s/2) e^{-i v s / hbar} ds.
/// The imaginary residue of the transform is asserted below 1e-10.
PhaseSpaceField wigner(const DensityMatrix& w);

/// Weyl quantization onto the operator grid with npoints = field nx / 2:
///   omega(x; y) = N int W((x+y)/2, v) e^{i v (x-y) / hbar} dv.
/// Exact inverse of wigner when N = hbar^{-1}.
DensityMatrix weyl(const PhaseSpaceField& w, double hbar, std::int64_t n_particles);

}  // namespace hvl
