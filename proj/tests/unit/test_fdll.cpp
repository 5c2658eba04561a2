#include <doctest.h>

#include <cmath>

#include "hvlab/fdll.hpp"

using namespace hvl;

TEST_CASE("gaussian bump basics") {
  GaussianBump chi{1.5, 0.7};
  CHECK(chi(1.5) == 1.0);
  CHECK(chi(1.5 + 0.7) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // symmetry in centre and argument
  GaussianBump swapped{0.2, 0.7};
  CHECK(chi(0.2) == doctest::Approx(swapped(1.5)).epsilon(1e-15));
  CHECK(chi(5.0) > 0.0);
  CHECK(chi(5.0) < 1e-10);
}

TEST_CASE("ball intersection volume closed forms") {
  const double pi = M_PI;
  SUBCASE("coincident balls give the full ball volume") {
    CHECK(ball_intersection_volume(3, 2.0, 0.0) ==
          doctest::Approx(4.0 / 3.0 * pi * 8.0).epsilon(1e-14));
    CHECK(ball_intersection_volume(2, 1.5, 0.0) == doctest::Approx(pi * 2.25).epsilon(1e-14));
  }
  SUBCASE("disjoint balls give zero, continuously") {
    CHECK(ball_intersection_volume(3, 1.0, 2.0) == 0.0);
    CHECK(ball_intersection_volume(3, 1.0, 5.0) == 0.0);
    CHECK(ball_intersection_volume(3, 1.0, 2.0 - 1e-8) < 1e-14);
    CHECK(ball_intersection_volume(2, 1.0, 2.0 - 1e-8) < 1e-10);
  }
  SUBCASE("unit balls one apart") {
    CHECK(ball_intersection_volume(3, 1.0, 1.0) == doctest::Approx(5.0 * pi / 12.0).epsilon(1e-14));
    // 2D lens: 2 acos(1/2) - (1/2) sqrt(3)
    CHECK(ball_intersection_volume(2, 1.0, 1.0) ==
          doctest::Approx(2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0)).epsilon(1e-14));
  }
  SUBCASE("nonincreasing in separation") {
    double prev = ball_intersection_volume(3, 1.0, 0.0);
    for (double d = 0.1; d < 2.2; d += 0.1) {
      const double v = ball_intersection_volume(3, 1.0, d);
      CHECK(v <= prev + 1e-14);
      prev = v;
    }
  }
  SUBCASE("argument validation") {
    CHECK_THROWS(ball_intersection_volume(3, 0.0, 1.0));
    CHECK_THROWS(ball_intersection_volume(3, 1.0, -0.5));
    CHECK_THROWS(ball_intersection_volume(4, 1.0, 0.5));
  }
}

TEST_CASE("coulomb weight has the exact power law") {
  const RadialPotential v = RadialPotential::coulomb();
  const FdlLWeight w = compute_weight(v, 3, 1e-2, 1e2, 64);
  // for 1/r the raw weight is proportional to r^{-5}
  const double c1 = w.raw(0.5) * std::pow(0.5, 5);
  for (double r : {0.1, 1.0, 3.0, 20.0}) {
    CHECK(w.raw(r) * std::pow(r, 5) == doctest::Approx(c1).epsilon(1e-10));
  }
  // calibrated reconstruction inverts the potential: d * V_rec(d) = 1
  for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(d * reconstruct_indicator(w, d) - 1.0) < 1e-6);
  }
  CHECK(w.validity < 1e-6);
}

TEST_CASE("inverse-power weight scales as r^(-a-4)") {
  const double a = 1.5;
  const FdlLWeight w = compute_weight(RadialPotential::inverse_power(a), 3, 1e-2, 1e2, 32);
  const double c1 = w.raw(1.0);
  for (double r : {0.2, 0.7, 5.0}) {
    CHECK(w.raw(r) * std::pow(r, a + 4.0) == doctest::Approx(c1).epsilon(1e-10));
  }
  for (double d : {0.3, 1.0, 3.0}) {
    CHECK(reconstruct_indicator(w, d) == doctest::Approx(std::pow(d, -a)).epsilon(1e-5));
  }
}

TEST_CASE("yukawa reconstruction matches the potential over [0.2, 5]") {
  const double mu = 1.0;
  const FdlLWeight w = compute_weight(RadialPotential::yukawa(mu), 3, 1e-3, 1e3, 96);
  for (double d : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    const double truth = std::exp(-mu * d) / d;
    CHECK(std::abs(reconstruct_indicator(w, d) - truth) / truth < 1e-5);
  }
}

TEST_CASE("weight argument validation") {
  const RadialPotential v = RadialPotential::coulomb();
  CHECK_THROWS(compute_weight(v, 4, 1e-2, 1e2, 32));
  CHECK_THROWS(compute_weight(v, 3, -1.0, 1e2, 32));
  CHECK_THROWS(compute_weight(v, 3, 1.0, 0.5, 32));
  CHECK_THROWS(compute_weight(v, 3, 1e-2, 1e2, 1));
  const FdlLWeight w = compute_weight(v, 3, 1e-2, 1e2, 16);
  CHECK_THROWS(reconstruct_indicator(w, 0.0));
  CHECK_THROWS(reconstruct_indicator(w, 1e4));  // beyond tabulated radii
  CHECK_THROWS(w.raw(-1.0));
}

TEST_CASE("gaussian-bump reconstruction reports a deviation without asserting it") {
  const FdlLWeight w = compute_weight(RadialPotential::coulomb(), 3, 1e-2, 1e2, 32);
  for (GaussianForm form : {GaussianForm::full, GaussianForm::reduced, GaussianForm::reduced_wide}) {
    const GaussianReconstruction rec = reconstruct_gaussian(w, 1.0, form);
    CHECK(std::isfinite(rec.value));
    CHECK(std::isfinite(rec.deviation));
    CHECK(rec.value > 0.0);
  }
  CHECK_THROWS(reconstruct_gaussian(w, -1.0, GaussianForm::full));
}
