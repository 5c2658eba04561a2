#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "hvlab/density_matrix.hpp"
#include "hvlab/fft.hpp"
#include "hvlab/linalg.hpp"
#include "hvlab/potential.hpp"
#include "hvlab/transforms.hpp"

using namespace hvl;
using Cd = std::complex<double>;

namespace {

RunContext make_ctx(double hbar, double L, int nx, int d = 1) {
  RunContext ctx;
  ctx.convention.dimension = d;
  ctx.hbar = hbar;
  ctx.n_particles = std::llround(std::pow(hbar, -d));
  ctx.grid = SpatialGrid(L, nx);
  ctx.phase_grid = wigner_induced_grid(ctx.grid, hbar);
  return ctx;
}

// rank-one pure state N |phi><phi| with a normalized Gaussian orbital
DensityMatrix pure_state(const SpatialGrid& g, double hbar, std::int64_t n, double sigma,
                         double x0 = 0.0) {
  Eigen::VectorXcd phi(g.npoints);
  for (int j = 0; j < g.npoints; ++j) {
    const double x = g.node(j) - x0;
    phi(j) = std::exp(-x * x / (2.0 * sigma * sigma));
  }
  phi /= std::sqrt(phi.squaredNorm() * g.spacing());
  DensityMatrix w;
  w.grid = g;
  w.dimension = 1;
  w.hbar = hbar;
  w.n_particles = n;
  w.m = static_cast<double>(n) * g.spacing() * (phi * phi.adjoint());
  return w;
}

DensityMatrix random_density(const SpatialGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd a(g.npoints, g.npoints);
  for (int i = 0; i < g.npoints; ++i)
    for (int j = 0; j < g.npoints; ++j) a(i, j) = Cd(u(rng), u(rng));
  DensityMatrix w;
  w.grid = g;
  w.dimension = 1;
  w.hbar = 1.0;
  w.n_particles = 1;
  w.m = 0.5 * (a + a.adjoint().eval());
  return w;
}

InitialSpec tapered_gaussian(double sx, double sv) {
  InitialSpec s;
  s.profile = "gaussian";
  s.sigma_x = sx;
  s.sigma_v = sv;
  s.taper_v1 = 0.55;
  s.taper_v2 = 0.75;
  return s;
}

}  // namespace

TEST_CASE("mixed-state construction: trace, hermiticity, band") {
  const RunContext ctx = make_ctx(0.125, 10.0, 64);
  double eps = -1.0;
  const DensityMatrix w = build_mixed_state(tapered_gaussian(1.6, 0.7), ctx, &eps);
  CHECK(w.trace() == doctest::Approx(static_cast<double>(ctx.n_particles)).epsilon(1e-12));
  CHECK(w.hermiticity_defect() < 1e-12);
  CHECK(eps >= 0.0);
  CHECK(eps < 1e-3 * static_cast<double>(ctx.n_particles));
  // the recorded clip and the defect of the clipped state are measured at
  // different stages; both must stay small, they need not coincide
  CHECK(fermionic_defect(w) < 1e-3 * static_cast<double>(ctx.n_particles));

  const auto [lo, hi] = spectral_range(w);
  CHECK(lo > -1e-3);
  CHECK(hi < 1.0 + 1e-3);

  const Eigen::VectorXd rho = spatial_density(w);
  CHECK(rho.sum() * ctx.grid.spacing() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.minCoeff() > -1e-10);
}

TEST_CASE("spatial density of a pure state is the orbital density") {
  const SpatialGrid g(10.0, 64);
  const DensityMatrix w = pure_state(g, 0.25, 4, 1.0);
  const Eigen::VectorXd rho = spatial_density(w);
  CHECK(rho.sum() * g.spacing() == doctest::Approx(1.0).epsilon(1e-13));
  // rho is |phi|^2: symmetric and peaked at the centre
  const int c = g.npoints / 2;
  CHECK(rho.maxCoeff() == doctest::Approx(rho(c)).epsilon(1e-12));
  for (int j = 1; j < g.npoints; ++j)
    CHECK(rho(j) == doctest::Approx(rho(g.npoints - j)).epsilon(1e-10));
}

TEST_CASE("trace-norm distance is a metric and is diagonal-exact") {
  const SpatialGrid g(10.0, 24);
  const DensityMatrix a = random_density(g, 1), b = random_density(g, 2), c = random_density(g, 3);
  CHECK(trace_norm_distance(a, a) == 0.0);
  CHECK(trace_norm_distance(a, b) == doctest::Approx(trace_norm_distance(b, a)).epsilon(1e-13));
  CHECK(trace_norm_distance(a, c) <=
        trace_norm_distance(a, b) + trace_norm_distance(b, c) + 1e-12);
  CHECK(trace_norm_distance(a, b) > 0.0);

  DensityMatrix d1 = a, d2 = a;
  d1.m = Eigen::MatrixXcd::Zero(g.npoints, g.npoints);
  d2.m = Eigen::MatrixXcd::Zero(g.npoints, g.npoints);
  double expect = 0.0;
  for (int j = 0; j < g.npoints; ++j) {
    d1.m(j, j) = 0.1 * j;
    d2.m(j, j) = 0.05 * j * j;
    expect += std::abs(0.1 * j - 0.05 * j * j);
  }
  CHECK(trace_norm_distance(d1, d2) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("coordinate-commutator density") {
  const SpatialGrid g(10.0, 48);
  const DensityMatrix w = pure_state(g, 0.25, 4, 0.8);

  SUBCASE("diagonal states commute with the coordinate") {
    DensityMatrix diag = w;
    diag.m = w.m.diagonal().asDiagonal();
    const CommutatorDensity cd = commutator_density(diag, 0);
    CHECK(cd.l1 < 1e-12);
    CHECK(cd.linf < 1e-12);
  }

  SUBCASE("matches an independently assembled absolute value") {
    const CommutatorDensity cd = commutator_density(w, 0);
    Eigen::MatrixXcd c(g.npoints, g.npoints);
    for (int i = 0; i < g.npoints; ++i)
      for (int j = 0; j < g.npoints; ++j) c(i, j) = (g.node(i) - g.node(j)) * w.m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Cd(0.0, 1.0) * c);
    const Eigen::MatrixXcd abs_c = es.eigenvectors() *
                                   es.eigenvalues().cwiseAbs().asDiagonal() *
                                   es.eigenvectors().adjoint();
    const Eigen::VectorXd oracle = abs_c.diagonal().real() / w.weight();
    CHECK((cd.rho_abs - oracle).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(cd.l1 == doctest::Approx(es.eigenvalues().cwiseAbs().sum()).epsilon(1e-10));
    CHECK(cd.linf == doctest::Approx(oracle.maxCoeff()).epsilon(1e-10));
    CHECK(!cd.locality_warning);
  }

  SUBCASE("sup bound by the l1 mass") {
    const CommutatorDensity cd = commutator_density(w, 0);
    CHECK(cd.linf <= cd.l1 / g.spacing() + 1e-12);
  }

  SUBCASE("states touching the boundary raise the locality warning") {
    const DensityMatrix edge = pure_state(g, 0.25, 4, 1.0, 4.5);
    const CommutatorDensity cd = commutator_density(edge, 0);
    CHECK(cd.locality_warning);
    // minimal-image folding never warns
    CHECK(!commutator_density(edge, 0, true).locality_warning);
  }
}

TEST_CASE("remainder operator") {
  const SpatialGrid g(10.0, 64);
  const DensityMatrix w = pure_state(g, 0.25, 4, 0.9);

  SUBCASE("constant potential gives a vanishing remainder") {
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(g.npoints, 3.7);
    const DensityMatrix b = remainder_operator(w, u);
    CHECK(b.m.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(remainder_trace_norm(b) < 1e-10);
  }

  SUBCASE("single-mode potential matches the closed-form bracket") {
    const double k = 2.0 * M_PI / g.length;
    Eigen::VectorXd u(g.npoints);
    for (int j = 0; j < g.npoints; ++j) u(j) = std::cos(k * g.node(j));
    const DensityMatrix b = remainder_operator(w, u);
    // bracket assembled with the analytic midpoint derivative
    double max_err = 0.0;
    for (int i = 0; i < g.npoints; ++i) {
      for (int j = 0; j < g.npoints; ++j) {
        const double xi = g.node(i), xj = g.node(j);
        const double bracket =
            u(i) - u(j) + k * std::sin(k * 0.5 * (xi + xj)) * (xi - xj);
        max_err = std::max(max_err, std::abs(b.m(i, j) - bracket * w.m(i, j)));
      }
    }
    CHECK(max_err < 1e-11);
    // anti-Hermitian by construction
    CHECK((b.m + b.m.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(remainder_trace_norm(b) > 0.0);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS(remainder_operator(w, Eigen::VectorXd::Zero(10)));
  }
}

TEST_CASE("mean-field step: unitary conjugation preserves the spectrum") {
  const RunContext ctx = make_ctx(0.125, 10.0, 64);
  const DensityMatrix w0 = build_mixed_state(tapered_gaussian(1.6, 0.7), ctx, nullptr);
  const Eigen::VectorXd kernel =
      periodized_kernel(RadialPotential::gaussian(1.0, 0.5), ctx.grid, 0.0);
  const Eigen::VectorXd ev0 = hermitian_eigenvalues(w0.m);

  DensityMatrix w = w0;
  const Convention conv = ctx.convention;
  for (int s = 0; s < 20; ++s) w = hartree_step(w, 1e-2, kernel, conv);

  CHECK(w.trace() == doctest::Approx(w0.trace()).epsilon(1e-13));
  CHECK(w.hermiticity_defect() < 1e-11);
  const Eigen::VectorXd ev = hermitian_eigenvalues(w.m);
  CHECK((ev - ev0).cwiseAbs().maxCoeff() < 1e-9);

  SUBCASE("momentum eigenstates are stationary under zero potential") {
    DensityMatrix plane = w0;
    const double kq = ctx.grid.wavenumber(2);
    Eigen::VectorXcd e(ctx.grid.npoints);
    for (int j = 0; j < ctx.grid.npoints; ++j)
      e(j) = std::exp(Cd(0.0, kq * ctx.grid.node(j))) / std::sqrt(ctx.grid.length);
    plane.m = ctx.grid.spacing() * (e * e.adjoint());
    const Eigen::VectorXd zero_k = Eigen::VectorXd::Zero(ctx.grid.npoints);
    DensityMatrix out = hartree_step(plane, 1e-2, zero_k, conv);
    CHECK((out.m - plane.m).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("dt must be positive") {
    CHECK_THROWS(hartree_step(w0, 0.0, kernel, conv));
  }
}

TEST_CASE("hartree energy closed forms") {
  const SpatialGrid g(10.0, 32);
  Convention conv;
  // plane-wave projector: pure kinetic energy kf hbar^2 k^2 N
  DensityMatrix plane;
  plane.grid = g;
  plane.dimension = 1;
  plane.hbar = 0.25;
  plane.n_particles = 4;
  const double kq = g.wavenumber(3);
  Eigen::VectorXcd e(g.npoints);
  for (int j = 0; j < g.npoints; ++j)
    e(j) = std::exp(Cd(0.0, kq * g.node(j))) / std::sqrt(g.length);
  plane.m = 4.0 * g.spacing() * (e * e.adjoint());

  const Eigen::VectorXd zero_k = Eigen::VectorXd::Zero(g.npoints);
  const double ekin = hartree_energy(plane, zero_k, conv);
  CHECK(ekin == doctest::Approx(conv.kinetic_factor * plane.hbar * plane.hbar * kq * kq * 4.0)
                    .epsilon(1e-10));

  // uniform density: interaction term is (N/2L) * integral of the kernel
  const Eigen::VectorXd kernel = periodized_kernel(RadialPotential::gaussian(1.0, 1.0), g, 0.0);
  const double etot = hartree_energy(plane, kernel, conv);
  const double eint = 4.0 / (2.0 * g.length) * kernel.sum() * g.spacing();
  CHECK(etot - ekin == doctest::Approx(eint).epsilon(1e-10));
}

TEST_CASE("fermionic defect and spectral range on explicit spectra") {
  const SpatialGrid g(10.0, 4);
  DensityMatrix w;
  w.grid = g;
  w.dimension = 1;
  w.hbar = 1.0;
  w.n_particles = 1;
  w.m = Eigen::MatrixXcd::Zero(4, 4);
  w.m(0, 0) = -0.1;
  w.m(1, 1) = 0.5;
  w.m(2, 2) = 1.2;
  w.m(3, 3) = 1.0;
  CHECK(fermionic_defect(w) == doctest::Approx(0.3).epsilon(1e-12));
  const auto [lo, hi] = spectral_range(w);
  CHECK(lo == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("initial phase-space profile: mass, positivity, taper support") {
  const SpatialGrid g(10.0, 64);
  const double hbar = 0.125;
  InitialSpec spec = tapered_gaussian(1.2, 0.5);
  const PhaseSpaceField f = initial_field(spec, g, hbar);
  CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.values.minCoeff() >= 0.0);
  // exactly zero beyond taper_v2 * vmax
  for (int k = 0; k < f.grid.nv; ++k) {
    if (std::abs(f.grid.vnode(k)) >= spec.taper_v2 * f.grid.vmax) {
      CHECK(f.values.col(k).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("translation-invariant profile is uniform in x") {
    InitialSpec ti = spec;
    ti.profile = "translation_invariant";
    const PhaseSpaceField u = initial_field(ti, g, hbar);
    CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-10));
    for (int k = 0; k < u.grid.nv; ++k) {
      const double lo = u.values.col(k).minCoeff(), hi = u.values.col(k).maxCoeff();
      CHECK(hi - lo < 1e-14);
    }
  }

  SUBCASE("unknown profile is rejected") {
    InitialSpec bad = spec;
    bad.profile = "ring";
    CHECK_THROWS(initial_field(bad, g, hbar));
  }
}

TEST_CASE("three-dimensional mixed state is a normalized product") {
  RunContext ctx = make_ctx(0.5, 8.0, 8, 3);
  CHECK(ctx.n_particles == 8);
  double eps = -1.0;
  // wide profile: the per-axis occupation bound is tight on this coarse grid
  const DensityMatrix w = build_mixed_state(tapered_gaussian(2.2, 0.6), ctx, &eps);
  CHECK(w.size() == 8 * 8 * 8);
  CHECK(w.trace() == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(w.hermiticity_defect() < 1e-12);
  // coordinate() decodes the row-major flattening
  CHECK(w.coordinate(0, 0) == doctest::Approx(-4.0));
  CHECK(w.coordinate(1, 2) == doctest::Approx(-3.0));  // innermost axis moves first
  CHECK(w.coordinate(8, 1) == doctest::Approx(-3.0));
  CHECK(w.coordinate(8, 2) == doctest::Approx(-4.0));
}
