#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvlab/potential.hpp"

namespace hvl {

/// Gaussian bump chi_{(r,z)}(x) = exp(-|x-z|^2 / r^2).
struct GaussianBump {
  double center = 0.0;
  double width = 1.0;  // r > 0

  double operator()(double x) const {
    const double u = (x - center) / width;
    return std::exp(-u * u);
  }
};

/// Radial weight of the ball-overlap decomposition of a radial potential,
/// with the single calibration constant that reconciles the literal weight
/// formula with the reconstruction identity.
struct FdlLWeight {
  int dimension = 3;       // n
  Eigen::VectorXd radii;   // log-spaced tabulation grid
  Eigen::VectorXd values;  // raw (uncalibrated) g at the tabulated radii
  double calibration = 1.0;  // c*, fitted against reconstruction
  double validity = 0.0;     // max relative reconstruction error over the probe set

  std::function<double(double)> raw;        // uncalibrated g(r), closed form / quadrature
  std::function<double(double)> potential;  // V(d), kept for deviation reports

  double g(double r) const { return calibration * raw(r); }
};

/// Evaluate the weight over a log grid and calibrate the constant by least
/// squares against the potential at 32 probe separations in [0.2, 5].
FdlLWeight compute_weight(const RadialPotential& v, int n, double r_min = 1e-3,
                          double r_max = 1e3, int points_per_decade = 512);

/// Exact volume of the intersection of two balls of radius r whose centres
/// are d apart, n = 2 or 3.
double ball_intersection_volume(int n, double r, double d);

/// Calibrated potential value at separation d from the ball-overlap form.
double reconstruct_indicator(const FdlLWeight& w, double d);

enum class GaussianForm {
  full,          // (4/pi) int g(r) (pi r^2/2)^{n/2} exp(-d^2/(2r^2)) dr
  reduced,       // (4/pi) int r^3 g(r) exp(-2d^2/r^2) dr
  reduced_wide,  // same with the wider width exp(-d^2/(2r^2))
};

struct GaussianReconstruction {
  double value = 0.0;
  double deviation = 0.0;  // relative deviation from V(d); reported, never asserted
};

GaussianReconstruction reconstruct_gaussian(const FdlLWeight& w, double d, GaussianForm form);

}  // namespace hvl
