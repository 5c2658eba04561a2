#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvlab/density_matrix.hpp"
#include "hvlab/grid.hpp"

namespace hvl {

/// One measured inequality or ratio: lhs against rhs at a labelled point.
struct MonitorSample {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string label;
  bool trusted = true;
};

/// Discrete Hardy-Littlewood maximal function with centred balls over the
/// dyadic radius set {0, dx, 2 dx, 4 dx, ...} up to half the domain,
/// periodic wrap.  Negative input entries are clipped to zero.
Eigen::VectorXd hl_maximal(const Eigen::VectorXd& f, const SpatialGrid& grid, int dimension);

/// Exhaustive-radius variant, the oracle for the dyadic one.
Eigen::VectorXd hl_maximal_all_radii(const Eigen::VectorXd& f, const SpatialGrid& grid,
                                     int dimension);

struct Lemma3Sample {
  double r = 0.0;
  std::vector<double> z;  // bump centre
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct Lemma3Result {
  std::vector<Lemma3Sample> samples;
  double fitted_c = 0.0;  // max ratio
  bool pass = false;      // max/min ratio < 3 (3D assertions only)
  bool report_only = false;
};

/// Pointwise commutator bound with a Gaussian bump: lhs = tr |[chi_(r,z), w]|,
/// rhs = r^{3/2 - 3 delta} sum_i ||rho_i||_1^{1/6+delta} (rho_i^*(z))^{5/6-delta}
/// with rho_i the absolute-commutator densities.  The exponents are specific
/// to three dimensions; other dimensions are admitted only in report-only
/// mode (values printed, no verdict).
Lemma3Result lemma3_check(const DensityMatrix& w, double delta,
                          const std::vector<double>& radii,
                          const std::vector<std::vector<double>>& centers,
                          bool report_only = false);

/// Per-time ratio of sum_i (||rho_i||_1 + ||rho_i||_inf) against N hbar.
std::vector<MonitorSample> assumption9_monitor(const std::vector<double>& times,
                                               const std::vector<DensityMatrix>& states,
                                               bool minimal_image = false);

struct DuhamelReport {
  std::vector<MonitorSample> inequality;  // tr|w - wt| vs cumulative rhs integrals
  std::vector<MonitorSample> prop1;       // tr|[V*(rho - rhot), wt]| / (hbar tr|w - wt|)
  std::vector<double> commutator_terms;   // integrand values per checkpoint
  std::vector<double> remainder_terms;    // tr|B_s| per checkpoint
};

/// Evaluates the Duhamel-type inequality and the single-commutator ratio on
/// aligned checkpoints of the two evolutions.  kernel is the periodized
/// potential column on the shared spatial grid.
DuhamelReport duhamel_monitor(const std::vector<double>& times,
                              const std::vector<DensityMatrix>& hartree,
                              const std::vector<DensityMatrix>& vlasov_weyl,
                              const Eigen::VectorXd& kernel);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;  // log value at log hbar = 0
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
};

/// Least-squares log-log fit with a fixed-seed residual-bootstrap interval.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace hvl
