#include "hvlab/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "hvlab/fft.hpp"

namespace hvl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PhaseSpaceField wigner(const DensityMatrix& w) {
  if (w.dimension != 1)
    throw std::invalid_argument("wigner: implemented for 1D operators");
  const int n = w.grid.npoints;
  const int n2 = 2 * n;
  const double dx = w.grid.spacing();

  // kernel interpolated onto the half-spaced grid
  Eigen::MatrixXcd k2 = fourier_upsample2(Eigen::MatrixXcd(w.m / dx));

  PhaseSpaceField out;
  out.grid = wigner_induced_grid(w.grid, w.hbar);
  out.values.resize(n2, n2);

  const Fft& fft = Fft::of(n2);
  Eigen::VectorXcd f(n2);
  double imag_max = 0.0;
  for (int c = 0; c < n2; ++c) {
    for (int m = 0; m < n2; ++m) {
      const int a = (c + m) % n2;
      const int b = (c - m + n2) % n2;
      f(m) = k2(a, b);
    }
    fft.forward(f.data());
    // DFT bin kappa holds velocity frequency p = kappa (wraparound); natural
    // column k corresponds to p = k - n, i.e. bin (k + n) mod 2n.
    for (int k = 0; k < n2; ++k) {
      const Complex val = f((k + n) % n2) * (dx / (2.0 * kPi));
      out.values(c, k) = val.real();
      imag_max = std::max(imag_max, std::abs(val.imag()));
    }
  }
  const double scale = out.values.cwiseAbs().maxCoeff();
  if (imag_max > 1e-10 * std::max(scale, 1.0))
    throw std::runtime_error("wigner: transform has a non-Hermitian residue");
  return out;
}

DensityMatrix weyl(const PhaseSpaceField& w, double hbar, std::int64_t n_particles) {
  const int n2 = w.grid.spatial.npoints;
  if (n2 % 2 != 0) throw std::invalid_argument("weyl: field grid must have even point count");
  const int n = n2 / 2;
  const SpatialGrid target(w.grid.spatial.length, n);
  const PhaseGrid induced = wigner_induced_grid(target, hbar);
  if (!(induced == w.grid))
    throw std::invalid_argument("weyl: field grid is not the induced grid of the target operator");

  const double dv = w.grid.vspacing();
  const double dx = target.spacing();

  // F_c(m) = sum_p W(c, p) e^{2 pi i p m / 2n} over frequencies p = k - n
  Eigen::MatrixXcd fc(n2, n2);
  const Fft& fft = Fft::of(n2);
  Eigen::VectorXcd row(n2);
  for (int c = 0; c < n2; ++c) {
    for (int k = 0; k < n2; ++k) row((k + n) % n2) = Complex(w.values(c, k), 0.0);
    fft.backward(row.data());
    fc.row(c) = row.transpose();
  }

  DensityMatrix out;
  out.grid = target;
  out.dimension = 1;
  out.hbar = hbar;
  out.n_particles = n_particles;
  out.m.resize(n, n);
  const double pref = static_cast<double>(n_particles) * dv * dx;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.m(i, j) = pref * fc((i + j) % n2, ((i - j) % n2 + n2) % n2);

  const double defect = out.hermiticity_defect();
  const double scale = out.m.cwiseAbs().maxCoeff();
  if (defect > 1e-10 * std::max(scale, 1.0))
    throw std::runtime_error("weyl: output operator is not Hermitian");
  out.m = 0.5 * (out.m + out.m.adjoint()).eval();
  return out;
}

}  // namespace hvl
