#include "hvlab/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hvlab/fft.hpp"
#include "hvlab/linalg.hpp"
#include "hvlab/potential.hpp"
#include "hvlab/transforms.hpp"

namespace hvl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double DensityMatrix::coordinate(int flat, int axis) const {
  if (axis < 0 || axis >= dimension) throw std::invalid_argument("coordinate: bad axis");
  int stride = 1;
  for (int a = dimension - 1; a > axis; --a) stride *= grid.npoints;
  return grid.node((flat / stride) % grid.npoints);
}

Eigen::VectorXd spatial_density(const DensityMatrix& w) {
  const double scale = w.weight() * static_cast<double>(w.n_particles);
  return w.m.diagonal().real() / scale;
}

double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.grid == b.grid) || a.dimension != b.dimension || a.hbar != b.hbar)
    throw std::invalid_argument("trace_norm_distance: operators on different grids");
  return hermitian_trace_norm(a.m - b.m);
}

CommutatorDensity commutator_density(const DensityMatrix& w, int axis, bool minimal_image) {
  const int n = w.size();
  Eigen::MatrixXcd c(n, n);
  for (int i = 0; i < n; ++i) {
    const double xi = w.coordinate(i, axis);
    for (int j = 0; j < n; ++j) {
      double diff = xi - w.coordinate(j, axis);
      if (minimal_image) diff = w.grid.minimal_image(diff);
      c(i, j) = diff * w.m(i, j);
    }
  }
  // c is anti-Hermitian; |c| through the Hermitian matrix i c
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd ev = hermitian_eigensystem(Complex(0.0, 1.0) * c, vecs);
  Eigen::MatrixXcd abs_c = vecs * ev.cwiseAbs().asDiagonal() * vecs.adjoint();

  CommutatorDensity out;
  out.rho_abs = abs_c.diagonal().real() / w.weight();
  out.l1 = ev.cwiseAbs().sum();
  out.linf = out.rho_abs.maxCoeff();

  // the literal coordinate operator is meaningful only for localised states
  if (!minimal_image) {
    const Eigen::VectorXd rho = spatial_density(w);
    const double margin = 0.05 * w.grid.length;
    for (int j = 0; j < n && !out.locality_warning; ++j) {
      for (int a = 0; a < w.dimension; ++a) {
        const double x = w.coordinate(j, a);
        if (0.5 * w.grid.length - std::abs(x) < margin && rho(j) > 1e-8) {
          out.locality_warning = true;
          break;
        }
      }
    }
  }
  return out;
}

DensityMatrix remainder_operator(const DensityMatrix& w, const Eigen::VectorXd& u) {
  if (w.dimension != 1) throw std::invalid_argument("remainder_operator: implemented for 1D");
  const int n = w.grid.npoints;
  if (u.size() != n) throw std::invalid_argument("remainder_operator: potential size mismatch");

  const Eigen::VectorXd du = spectral_gradient(u, w.grid);
  const Eigen::VectorXd du_half = fourier_upsample2(du);  // gradient on the midpoint grid

  DensityMatrix b = w;
  for (int i = 0; i < n; ++i) {
    const double xi = w.grid.node(i);
    for (int j = 0; j < n; ++j) {
      const double bracket = u(i) - u(j) - du_half((i + j) % (2 * n)) * (xi - w.grid.node(j));
      b.m(i, j) = bracket * w.m(i, j);
    }
  }
  const double defect = (b.m + b.m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = std::max(b.m.cwiseAbs().maxCoeff(), 1.0);
  if (defect > 1e-10 * scale)
    throw std::runtime_error("remainder_operator: output is not anti-Hermitian");
  return b;
}

double remainder_trace_norm(const DensityMatrix& b) { return antihermitian_trace_norm(b.m); }

namespace {

// conjugate m by the diagonal-in-Fourier unitary with phases ph (length n):
// m -> F^-1 D F m F^-1 D^* F
void conjugate_fourier_diagonal(Eigen::MatrixXcd& m, const Eigen::VectorXcd& ph) {
  fft_forward_cols(m);
  m.array().colwise() *= ph.array();
  fft_backward_cols(m);
  m.adjointInPlace();
  fft_forward_cols(m);
  m.array().colwise() *= ph.array();
  fft_backward_cols(m);
  m.adjointInPlace();
}

}  // namespace

DensityMatrix hartree_step(const DensityMatrix& w, double dt, const Eigen::VectorXd& kernel,
                           const Convention& conv, bool with_exchange,
                           std::vector<std::string>* warnings) {
  if (w.dimension != 1) throw std::invalid_argument("hartree_step: implemented for 1D");
  if (dt <= 0.0) throw std::invalid_argument("hartree_step: dt must be positive");
  const int n = w.grid.npoints;

  Eigen::VectorXcd kin_half(n);
  for (int p = 0; p < n; ++p) {
    const double k = w.grid.wavenumber(p);
    kin_half(p) = std::exp(Complex(0.0, -conv.kinetic_factor * w.hbar * k * k * 0.5 * dt));
  }

  DensityMatrix out = w;
  conjugate_fourier_diagonal(out.m, kin_half);

  // potential step with U frozen from the half-stepped density
  const Eigen::VectorXd rho =
      out.m.diagonal().real() / (out.weight() * static_cast<double>(out.n_particles));
  Eigen::VectorXd u = periodic_convolve(kernel, rho, w.grid);

  const double wrap = u.cwiseAbs().maxCoeff() * dt / w.hbar;
  if (wrap > kPi && warnings)
    warnings->push_back("hartree_step: potential phase advance exceeds pi in one step");

  if (!with_exchange) {
    Eigen::VectorXcd ph(n);
    for (int j = 0; j < n; ++j) ph(j) = std::exp(Complex(0.0, -u(j) * dt / w.hbar));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.m(i, j) *= ph(i) * std::conj(ph(j));
  } else {
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      gen(i, i) = u(i);
      for (int j = 0; j < n; ++j) {
        const int off = std::abs(i - j);
        const int folded = std::min(off, n - off);
        gen(i, j) -= kernel(folded) * out.m(i, j) / static_cast<double>(out.n_particles);
      }
    }
    gen = 0.5 * (gen + gen.adjoint()).eval();
    Eigen::MatrixXcd vecs;
    const Eigen::VectorXd ev = hermitian_eigensystem(gen, vecs);
    Eigen::VectorXcd ph(n);
    for (int j = 0; j < n; ++j) ph(j) = std::exp(Complex(0.0, -ev(j) * dt / w.hbar));
    const Eigen::MatrixXcd prop = vecs * ph.asDiagonal() * vecs.adjoint();
    out.m = prop * out.m * prop.adjoint();
  }

  conjugate_fourier_diagonal(out.m, kin_half);
  return out;
}

double hartree_energy(const DensityMatrix& w, const Eigen::VectorXd& kernel,
                      const Convention& conv) {
  if (w.dimension != 1) throw std::invalid_argument("hartree_energy: implemented for 1D");
  const int n = w.grid.npoints;

  // kinetic: sum_p k_p^2 <e_p| omega |e_p> with unitary Fourier vectors
  Eigen::MatrixXcd a = w.m;
  fft_forward_cols(a);
  a.adjointInPlace();
  fft_forward_cols(a);
  a.adjointInPlace();  // a = F m F^H (unnormalised forward both sides)
  double kinetic = 0.0;
  for (int p = 0; p < n; ++p) {
    const double k = w.grid.wavenumber(p);
    kinetic += k * k * a(p, p).real() / n;
  }
  kinetic *= conv.kinetic_factor * w.hbar * w.hbar;

  const Eigen::VectorXd rho = spatial_density(w);
  const Eigen::VectorXd u = periodic_convolve(kernel, rho, w.grid);
  const double interaction = 0.5 * static_cast<double>(w.n_particles) *
                             (rho.array() * u.array()).sum() * w.grid.spacing();
  return kinetic + interaction;
}

std::pair<double, double> spectral_range(const DensityMatrix& w) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(w.m);
  return {ev.minCoeff(), ev.maxCoeff()};
}

double fermionic_defect(const DensityMatrix& w) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(w.m);
  double defect = 0.0;
  for (int i = 0; i < ev.size(); ++i)
    defect += std::max(0.0, ev(i) - 1.0) + std::max(0.0, -ev(i));
  return defect;
}

namespace {

// C-infinity partition bump: 1 below v1, 0 above v2.
double velocity_taper(double av, double v1, double v2) {
  if (v2 <= 0.0) return 1.0;
  if (av <= v1) return 1.0;
  if (av >= v2) return 0.0;
  const double a = (v2 - av) / (v2 - v1);
  const double fa = std::exp(-1.0 / a);
  const double fb = std::exp(-1.0 / (1.0 - a));
  return fa / (fa + fb);
}

}  // namespace

PhaseSpaceField initial_field(const InitialSpec& spec, const SpatialGrid& grid, double hbar) {
  PhaseSpaceField f;
  f.grid = wigner_induced_grid(grid, hbar);
  const int nx = f.grid.spatial.npoints;
  const int nv = f.grid.nv;
  const double tv1 = spec.taper_v1 * f.grid.vmax;
  const double tv2 = spec.taper_v2 * f.grid.vmax;
  if (spec.taper_v2 > 0.0 && !(spec.taper_v1 > 0.0 && spec.taper_v1 < spec.taper_v2 &&
                               spec.taper_v2 < 1.0))
    throw std::invalid_argument("initial taper needs 0 < taper_v1 < taper_v2 < 1");
  if (spec.profile == "fermi" && spec.edge_scale <= 0.0)
    throw std::invalid_argument("fermi profile needs edge_scale > 0");
  f.values.resize(nx, nv);
  for (int c = 0; c < nx; ++c) {
    const double x = f.grid.spatial.node(c);
    for (int k = 0; k < nv; ++k) {
      const double v = f.grid.vnode(k);
      const double taper = velocity_taper(std::abs(v), tv1, tv2);
      if (spec.profile == "gaussian") {
        const double gx = std::exp(-0.5 * std::pow((x - spec.x0) / spec.sigma_x, 2));
        const double gv = std::exp(-0.5 * std::pow((v - spec.v0) / spec.sigma_v, 2));
        f.values(c, k) = gx * gv * taper;
      } else if (spec.profile == "fermi") {
        // velocity plateau of radius sigma_v with a soft edge of width
        // edge_scale * hbar^edge_power: the edge sharpens with hbar, which is
        // the regime where the remainder-operator envelope ~ N hbar^2 is
        // sharp. With edge_scale_x > 0 the spatial factor is a plateau of
        // radius sigma_x with an hbar-dependent edge as well, which keeps the
        // density difference between the two hierarchies at the same order as
        // the trace-norm distance instead of one order below it
        const double hp = std::pow(hbar, spec.edge_power);
        const double w = spec.edge_scale * hp;
        double gx;
        if (spec.edge_scale_x > 0.0) {
          // logistic edge in x: the exponential tail keeps the box image on
          // the opposite side of the torus negligible at moderate box sizes
          const double wx = spec.edge_scale_x * hp;
          const double ax = (std::abs(x - spec.x0) - spec.sigma_x) / wx;
          gx = ax > 500.0 ? 0.0 : 1.0 / (1.0 + std::exp(ax));
        } else {
          gx = std::exp(-0.5 * std::pow((x - spec.x0) / spec.sigma_x, 2));
        }
        // gaussian edge in v: same hbar^edge_power width, but the tail dies
        // super-exponentially well inside the velocity taper, so the taper
        // never truncates a visible tail (truncation kinks leak into the
        // velocity buffer through the spectral force step)
        const double dv = std::abs(v - spec.v0) - spec.sigma_v;
        const double av = dv / w;
        const double gv = dv <= 0.0 ? 1.0 : (av > 37.0 ? 0.0 : std::exp(-0.5 * av * av));
        f.values(c, k) = gx * gv * taper;
      } else if (spec.profile == "translation_invariant") {
        const double gv = std::exp(-0.5 * std::pow((v - spec.v0) / spec.sigma_v, 2));
        f.values(c, k) = gv * taper;
      } else {
        throw std::invalid_argument("unknown initial profile '" + spec.profile + "'");
      }
    }
  }
  f.values /= f.mass();
  return f;
}

namespace {

// The operator is kept exactly equal to (a scalar multiple of) the Weyl
// quantization so that its phase-space transform reproduces the profile
// bit for bit; eigenvalues are only inspected, never clipped, because a
// clipped operator leaks mass into the advection buffer.
DensityMatrix quantize_profile(const PhaseSpaceField& w0, double hbar, std::int64_t n_particles,
                               double* eps_clip) {
  DensityMatrix w = weyl(w0, hbar, n_particles);
  const double defect = fermionic_defect(w);
  if (eps_clip) *eps_clip = defect / static_cast<double>(n_particles);
  if (defect >= 1e-3 * static_cast<double>(n_particles))
    throw std::runtime_error(
        "build_mixed_state: profile violates the fermionic bound at this hbar (defect " +
        std::to_string(defect / n_particles) + " of the trace)");
  const double tr = w.m.trace().real();
  if (tr <= 0.0) throw std::runtime_error("build_mixed_state: quantized state has no mass");
  w.m *= static_cast<double>(n_particles) / tr;
  return w;
}

}  // namespace

DensityMatrix build_mixed_state(const InitialSpec& spec, const RunContext& ctx,
                                double* eps_clip) {
  const int d = ctx.convention.dimension;
  if (d == 1) return quantize_profile(initial_field(spec, ctx.grid, ctx.hbar), ctx.hbar,
                                      ctx.n_particles, eps_clip);
  if (d != 3) throw std::invalid_argument("build_mixed_state: dimensions 1 and 3 supported");

  const auto n_axis = static_cast<std::int64_t>(std::llround(1.0 / ctx.hbar));
  if (n_axis < 1 || std::abs(n_axis * ctx.hbar - 1.0) > 1e-9)
    throw std::invalid_argument("build_mixed_state: 3D factors need hbar = 1/integer");
  DensityMatrix f = quantize_profile(initial_field(spec, ctx.grid, ctx.hbar), ctx.hbar, n_axis,
                                     eps_clip);

  const int n = f.size();
  DensityMatrix out;
  out.grid = ctx.grid;
  out.dimension = 3;
  out.hbar = ctx.hbar;
  out.n_particles = ctx.n_particles;
  out.m.resize(n * n * n, n * n * n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2)
          for (int i3 = 0; i3 < n; ++i3)
            for (int j3 = 0; j3 < n; ++j3)
              out.m((i1 * n + i2) * n + i3, (j1 * n + j2) * n + j3) =
                  f.m(i1, j1) * f.m(i2, j2) * f.m(i3, j3);
  return out;
}

}  // namespace hvl
