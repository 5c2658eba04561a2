#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hvlab/density_matrix.hpp"
#include "hvlab/linalg.hpp"
#include "hvlab/transforms.hpp"

using namespace hvl;
using Cd = std::complex<double>;

namespace {

RunContext make_ctx(double hbar, double L, int nx) {
  RunContext ctx;
  ctx.hbar = hbar;
  ctx.n_particles = std::llround(1.0 / hbar);
  ctx.grid = SpatialGrid(L, nx);
  ctx.phase_grid = wigner_induced_grid(ctx.grid, hbar);
  return ctx;
}

DensityMatrix gaussian_state(const RunContext& ctx) {
  InitialSpec spec;
  spec.profile = "gaussian";
  spec.sigma_x = 1.6;
  spec.sigma_v = 0.7;
  spec.taper_v1 = 0.55;
  spec.taper_v2 = 0.75;
  return build_mixed_state(spec, ctx, nullptr);
}

}  // namespace

TEST_CASE("weyl of wigner is the identity on operators") {
  const RunContext ctx = make_ctx(0.125, 10.0, 64);
  const DensityMatrix w = gaussian_state(ctx);
  const PhaseSpaceField field = wigner(w);
  const DensityMatrix back = weyl(field, w.hbar, w.n_particles);
  const double n = static_cast<double>(w.n_particles);
  CHECK(trace_norm_distance(w, back) / n < 1e-10);
  CHECK(back.trace() == doctest::Approx(w.trace()).epsilon(1e-12));
}

TEST_CASE("wigner transform geometry and marginals") {
  const RunContext ctx = make_ctx(0.125, 10.0, 64);
  const DensityMatrix w = gaussian_state(ctx);
  const PhaseSpaceField field = wigner(w);

  CHECK(field.grid == wigner_induced_grid(ctx.grid, ctx.hbar));

  // total phase-space mass equals tr(w)/N = 1 up to the interpolation at the
  // half-integer nodes of the doubled spatial grid, which is spectrally small
  // for smooth states but not an exact identity of the discrete transform
  CHECK(field.mass() == doctest::Approx(1.0).epsilon(1e-5));

  // velocity marginal reproduces the spatial density on the doubled grid
  const Eigen::VectorXd marg = field.values.rowwise().sum() * field.grid.vspacing();
  const Eigen::VectorXd rho = spatial_density(w);
  for (int j = 0; j < ctx.grid.npoints; ++j) {
    CHECK(marg(2 * j) == doctest::Approx(rho(j)).epsilon(1e-8));
  }
}

TEST_CASE("hermitian operators give real fields and back") {
  const RunContext ctx = make_ctx(0.25, 10.0, 32);
  const DensityMatrix w = gaussian_state(ctx);
  const PhaseSpaceField field = wigner(w);  // construction asserts Im < 1e-10
  const DensityMatrix back = weyl(field, ctx.hbar, ctx.n_particles);
  CHECK(back.hermiticity_defect() < 1e-10);
}

TEST_CASE("both transforms are linear") {
  const RunContext ctx = make_ctx(0.25, 10.0, 32);
  const DensityMatrix a = gaussian_state(ctx);

  InitialSpec other;
  other.profile = "gaussian";
  other.x0 = 1.0;
  other.sigma_x = 1.2;
  other.sigma_v = 0.9;
  other.taper_v1 = 0.55;
  other.taper_v2 = 0.75;
  const DensityMatrix b = build_mixed_state(other, ctx, nullptr);

  DensityMatrix combo = a;
  combo.m = 2.0 * a.m + 0.5 * b.m;
  const PhaseSpaceField fa = wigner(a), fb = wigner(b), fc = wigner(combo);
  CHECK((fc.values - 2.0 * fa.values - 0.5 * fb.values).cwiseAbs().maxCoeff() < 1e-10);

  PhaseSpaceField fsum = fa;
  fsum.values = 2.0 * fa.values + 0.5 * fb.values;
  const DensityMatrix qa = weyl(fa, ctx.hbar, ctx.n_particles);
  const DensityMatrix qb = weyl(fb, ctx.hbar, ctx.n_particles);
  const DensityMatrix qs = weyl(fsum, ctx.hbar, ctx.n_particles);
  CHECK((qs.m - 2.0 * qa.m - 0.5 * qb.m).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("round trip at the acceptance grid size") {
  const RunContext ctx = make_ctx(0.0625, 10.0, 128);
  const DensityMatrix w = gaussian_state(ctx);
  const double n = static_cast<double>(ctx.n_particles);

  // operator -> field -> operator, trace-norm exact
  const PhaseSpaceField field = wigner(w);
  const DensityMatrix back = weyl(field, ctx.hbar, ctx.n_particles);
  CHECK(trace_norm_distance(w, back) / n < 1e-10);

  // field -> operator -> field, L2 on the transform-exact image
  const PhaseSpaceField projected = wigner(weyl(field, ctx.hbar, ctx.n_particles));
  const PhaseSpaceField twice =
      wigner(weyl(projected, ctx.hbar, ctx.n_particles));
  const double dx = field.grid.spatial.spacing(), dv = field.grid.vspacing();
  const double l2 =
      std::sqrt((twice.values - projected.values).cwiseAbs2().sum() * dx * dv);
  CHECK(l2 < 1e-10);
}

TEST_CASE("wigner of a pure Gaussian matches direct quadrature of the definition") {
  // continuum pure state on a box large enough that periodization is invisible
  const double hbar = 0.25, L = 16.0, sigma = 1.0;
  const int nx = 64;
  const SpatialGrid g(L, nx);
  const std::int64_t n = 4;

  Eigen::VectorXcd phi(nx);
  for (int j = 0; j < nx; ++j) {
    const double x = g.node(j);
    phi(j) = std::pow(M_PI * sigma * sigma, -0.25) * std::exp(-x * x / (2.0 * sigma * sigma));
  }
  DensityMatrix w;
  w.grid = g;
  w.dimension = 1;
  w.hbar = hbar;
  w.n_particles = n;
  w.m = static_cast<double>(n) * g.spacing() * (phi * phi.adjoint());

  const PhaseSpaceField field = wigner(w);
  // closed form: W(x,v) = (N/pi) exp(-x^2/sigma^2) exp(-sigma^2 v^2/hbar^2) / hbar
  // normalized so that the double integral is tr(w)/N * 1 = 1 per particle
  double max_err = 0.0;
  for (int c = 0; c < field.grid.spatial.npoints; ++c) {
    const double x = field.grid.spatial.node(c);
    // stay where the box image at x +- L/2 is below the tolerance: the
    // discrete transform carries a mirror component of size exp(-(L/2-|x|)^2)
    if (std::abs(x) > 3.0) continue;
    for (int k = 0; k < field.grid.nv; ++k) {
      const double v = field.grid.vnode(k);
      if (std::abs(v) > 4.0 * hbar / sigma + 1.0) continue;
      // direct Riemann quadrature of the transform integral as the oracle
      Cd acc(0.0, 0.0);
      const int m = 16384;
      const double smax = 10.0 * sigma, ds = 2.0 * smax / m;
      for (int q = 0; q < m; ++q) {
        const double s = -smax + (q + 0.5) * ds;
        const double xp = x + 0.5 * s, xm = x - 0.5 * s;
        const double a = std::pow(M_PI * sigma * sigma, -0.5) *
                         std::exp(-(xp * xp + xm * xm) / (2.0 * sigma * sigma));
        acc += static_cast<double>(n) * a * std::exp(Cd(0.0, -v * s / hbar)) * ds;
      }
      // the quadrature integrates to hbar*N = 1, matching the field mass
      const double oracle = acc.real() / (2.0 * M_PI);
      max_err = std::max(max_err, std::abs(field.values(c, k) - oracle));
    }
  }
  CHECK(max_err < 1e-8);
}
