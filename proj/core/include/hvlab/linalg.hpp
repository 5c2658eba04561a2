#pragma once

#include <Eigen/Dense>

namespace hvl {

/// Eigenvalues of a Hermitian matrix, ascending (LAPACK zheevd, values only).
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

/// Full eigendecomposition of a Hermitian matrix; returns eigenvalues
/// ascending and fills `vectors` with the corresponding eigenvectors.
Eigen::VectorXd hermitian_eigensystem(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& vectors);

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
double hermitian_trace_norm(const Eigen::MatrixXcd& m);

/// Trace norm of an anti-Hermitian matrix (eigendecomposition of i*m).
double antihermitian_trace_norm(const Eigen::MatrixXcd& m);

}  // namespace hvl
