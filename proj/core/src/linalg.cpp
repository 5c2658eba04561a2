#include "hvlab/linalg.hpp"

#include <complex>
#include <stdexcept>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace hvl {

namespace {

Eigen::VectorXd zheevd(const Eigen::MatrixXcd& m, char jobz, Eigen::MatrixXcd* vectors) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian eigensolver: matrix not square");
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXcd a = m;
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                         w.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
  if (vectors) *vectors = std::move(a);
  return w;
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) { return zheevd(m, 'N', nullptr); }

Eigen::VectorXd hermitian_eigensystem(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& vectors) {
  return zheevd(m, 'V', &vectors);
}

double hermitian_trace_norm(const Eigen::MatrixXcd& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

double antihermitian_trace_norm(const Eigen::MatrixXcd& m) {
  return hermitian_trace_norm(std::complex<double>(0.0, 1.0) * m);
}

}  // namespace hvl
