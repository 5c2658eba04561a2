#include <doctest.h>

#include <cmath>
#include <random>

#include "hvlab/fft.hpp"

using namespace hvl;

namespace {

Eigen::VectorXd sample(const SpatialGrid& g, double (*f)(double)) {
  Eigen::VectorXd out(g.npoints);
  for (int j = 0; j < g.npoints; ++j) out(j) = f(g.node(j));
  return out;
}

}  // namespace

TEST_CASE("fft round trip") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd v(64);
  for (int i = 0; i < 64; ++i) v(i) = Complex(u(rng), u(rng));
  Eigen::VectorXcd w = v;
  fft_forward(w);
  fft_backward(w);
  CHECK((w - v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spectral gradient is exact on band-limited data") {
  SpatialGrid g(2.0 * M_PI, 32);
  Eigen::VectorXd f(g.npoints), df_exact(g.npoints);
  for (int j = 0; j < g.npoints; ++j) {
    const double x = g.node(j);
    f(j) = std::sin(3.0 * x) + 0.5 * std::cos(x);
    df_exact(j) = 3.0 * std::cos(3.0 * x) - 0.5 * std::sin(x);
  }
  CHECK((spectral_gradient(f, g) - df_exact).cwiseAbs().maxCoeff() < 1e-12);

  SUBCASE("gradient of a constant vanishes") {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(g.npoints, 4.2);
    CHECK(spectral_gradient(c, g).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("periodic convolution matches direct summation") {
  SpatialGrid g(10.0, 48);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd kernel(g.npoints), f(g.npoints);
  for (int j = 0; j < g.npoints; ++j) {
    kernel(j) = u(rng);
    f(j) = u(rng);
  }
  const Eigen::VectorXd spectral = periodic_convolve(kernel, f, g);
  Eigen::VectorXd direct = Eigen::VectorXd::Zero(g.npoints);
  for (int j = 0; j < g.npoints; ++j)
    for (int k = 0; k < g.npoints; ++k)
      direct(j) += kernel(((j - k) % g.npoints + g.npoints) % g.npoints) * f(k);
  direct *= g.spacing();
  CHECK((spectral - direct).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fourier upsampling interpolates band-limited data exactly") {
  SpatialGrid g(2.0 * M_PI, 16);
  Eigen::VectorXd f(g.npoints);
  for (int j = 0; j < g.npoints; ++j) f(j) = std::cos(2.0 * g.node(j)) + std::sin(5.0 * g.node(j));
  const Eigen::VectorXd up = fourier_upsample2(f);
  REQUIRE(up.size() == 2 * g.npoints);
  // even entries reproduce the original samples
  for (int j = 0; j < g.npoints; ++j) CHECK(up(2 * j) == doctest::Approx(f(j)).epsilon(1e-12));
  // odd entries land on the analytic midpoints
  const double dx2 = 0.5 * g.spacing();
  for (int j = 0; j < g.npoints; ++j) {
    const double x = g.node(j) + dx2;
    CHECK(up(2 * j + 1) ==
          doctest::Approx(std::cos(2.0 * x) + std::sin(5.0 * x)).epsilon(1e-11));
  }
}

TEST_CASE("matrix upsampling agrees with two 1D passes on separable data") {
  const int n = 8;
  Eigen::VectorXd a(n), b(n);
  SpatialGrid g(2.0 * M_PI, n);
  for (int j = 0; j < n; ++j) {
    a(j) = std::cos(g.node(j));
    b(j) = std::sin(2.0 * g.node(j)) + 1.0;
  }
  Eigen::MatrixXcd m = (a * b.transpose()).cast<Complex>();
  const Eigen::MatrixXcd up = fourier_upsample2(m);
  const Eigen::VectorXd ua = fourier_upsample2(a), ub = fourier_upsample2(b);
  CHECK((up - (ua * ub.transpose()).cast<Complex>()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("spectral shift properties") {
  SpatialGrid g(10.0, 64);
  Eigen::VectorXd f(g.npoints);
  for (int j = 0; j < g.npoints; ++j) {
    const double x = g.node(j);
    f(j) = std::exp(-x * x) + 0.3 * std::cos(2.0 * M_PI * x / 10.0);
  }

  SUBCASE("zero shift is the exact identity") {
    const Eigen::VectorXd s = spectral_shift(f, 0.0, g.length);
    CHECK((s - f).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("shift of a pure mode matches the closed form") {
    Eigen::VectorXd mode(g.npoints), shifted_exact(g.npoints);
    const double s = 0.7;
    for (int j = 0; j < g.npoints; ++j) {
      mode(j) = std::sin(2.0 * M_PI * 3.0 * g.node(j) / g.length);
      shifted_exact(j) = std::sin(2.0 * M_PI * 3.0 * (g.node(j) - s) / g.length);
    }
    CHECK((spectral_shift(mode, s, g.length) - shifted_exact).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("shifts compose additively") {
    const Eigen::VectorXd ab = spectral_shift(spectral_shift(f, 0.4, g.length), 0.9, g.length);
    const Eigen::VectorXd once = spectral_shift(f, 1.3, g.length);
    CHECK((ab - once).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("full-period shift is the identity up to the Nyquist projection") {
    const Eigen::VectorXd s = spectral_shift(f, g.length, g.length);
    // the Nyquist bin of this smooth profile is ~1e-15, so the projection is invisible
    CHECK((s - f).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("shift preserves the mean") {
    const Eigen::VectorXd s = spectral_shift(f, 1.7, g.length);
    CHECK(s.sum() == doctest::Approx(f.sum()).epsilon(1e-13));
  }
}
