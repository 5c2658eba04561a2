#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hvlab/grid.hpp"
#include "hvlab/potential.hpp"

namespace hvl {

/// Real phase-space density W(x_j, v_k); rows index x, columns index v.
struct PhaseSpaceField {
  PhaseGrid grid;
  Eigen::MatrixXd values;
  double time = 0.0;
  int outflow_streak = 0;  // consecutive steps with mass near +-vmax

  double mass() const { return values.sum() * grid.spatial.spacing() * grid.vspacing(); }
};

/// rho(x_j) = sum_k W(x_j, v_k) dv
Eigen::VectorXd vlasov_density(const PhaseSpaceField& w);

/// One Strang step: half x-advection (spectral shift by v dt/2 per v-row),
/// full v-advection with the frozen mean-field force, half x-advection.
/// kernel is the periodized potential column on the field's spatial grid.
PhaseSpaceField vlasov_step(const PhaseSpaceField& w, double dt, const Eigen::VectorXd& kernel,
                            const Convention& conv, std::vector<std::string>* warnings = nullptr);

/// Exact free streaming W0(x - v t, v) by spectral shift.
PhaseSpaceField free_transport_reference(const PhaseSpaceField& w0, double t);

/// Weighted Sobolev norm: (sum_{|beta|<=k} int (1+x^2+v^2)^a |d^beta W|^2)^(1/2),
/// derivatives spectral in both variables.
double sobolev_norm(const PhaseSpaceField& w, int k, double a,
                    std::vector<std::string>* warnings = nullptr);

/// max_j |d^2/dx^2 rho(x_j)| of the spatial marginal (hypothesis monitor).
double density_curvature_sup(const PhaseSpaceField& w);

}  // namespace hvl
