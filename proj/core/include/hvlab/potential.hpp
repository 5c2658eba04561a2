#pragma once

#include <array>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "hvlab/config.hpp"
#include "hvlab/grid.hpp"

namespace hvl {

/// Radial two-body interaction V(|x|) with closed-form derivatives up to
/// order 3.  The finite-difference fallback is kept for the self-test that
/// pins the closed forms.
class RadialPotential {
 public:
  static RadialPotential coulomb(double coupling = 1.0);
  static RadialPotential inverse_power(double a, double coupling = 1.0);
  static RadialPotential yukawa(double mu, double coupling = 1.0);
  static RadialPotential gaussian(double width = 1.0, double coupling = 1.0);
  static RadialPotential soft_coulomb(double eps, double coupling = 1.0);
  static RadialPotential zero();
  static RadialPotential make(const PotentialSpec& spec);

  const std::string& name() const { return name_; }
  bool singular_at_zero() const { return singular_; }
  double coupling() const { return coupling_; }

  double operator()(double r) const { return derivative(r, 0); }
  /// m-th radial derivative, m = 0..3, closed form.
  double derivative(double r, int m) const;
  /// Richardson-extrapolated central differences on the m = 0 closed form.
  double derivative_fd(double r, int m) const;

 private:
  RadialPotential(std::string name, bool singular, double coupling,
                  std::function<double(double, int)> deriv)
      : name_(std::move(name)), singular_(singular), coupling_(coupling), deriv_(std::move(deriv)) {}

  std::string name_;
  bool singular_ = false;
  double coupling_ = 1.0;
  std::function<double(double, int)> deriv_;  // (r, m) -> V^(m)(r), coupling excluded
};

/// Decay and integrability checks on a radial potential: finiteness of the
/// first three derivatives away from 0, vanishing of r^m V^(m)(r) at large r,
/// and the weighted integral  int_0^k |r^2 V''' - r V''| r^{9/2-delta} dr.
struct AssumptionReport {
  bool passes_a = false;
  bool passes_b = false;
  bool passes_c = false;
  // |r^m V^(m)(r)| sampled at r = 1e2, 1e3, 1e4 for m = 0..3.
  std::array<std::array<double, 3>, 4> decay_probes{};
  double c_integral = 0.0;
  double delta = 0.0;
  double cutoff = 0.0;
  std::string notes;
};

AssumptionReport check_assumptions(const RadialPotential& v, double delta, double k);

/// Even periodic kernel column V(|x_j|) on the grid; singular potentials need
/// eps > 0 (radius replaced by sqrt(r^2 + eps^2)).
Eigen::VectorXd periodized_kernel(const RadialPotential& v, const SpatialGrid& grid, double eps);

struct MeanField {
  Eigen::VectorXd potential;  // U = V * rho
  Eigen::VectorXd force;      // force_sign * dU/dx
};

/// Spectral convolution U = V * rho and its spectral-derivative force on a
/// precomputed periodized kernel.
MeanField mean_field(const Eigen::VectorXd& kernel, const Eigen::VectorXd& rho,
                     const SpatialGrid& grid, int force_sign);

MeanField mean_field(const RadialPotential& v, const Eigen::VectorXd& rho, const SpatialGrid& grid,
                     int force_sign, double eps);

}  // namespace hvl
