#pragma once

#include <complex>
#include <Eigen/Dense>

#include "hvlab/grid.hpp"

namespace hvl {

using Complex = std::complex<double>;

/// Cached FFTW plans for one transform length.  Plans are created with
/// FFTW_ESTIMATE so results are reproducible run to run.
class Fft {
 public:
  static const Fft& of(int n);

  int size() const { return n_; }
  void forward(Complex* data) const;   // in place, unnormalised, e^{-i k x}
  void backward(Complex* data) const;  // in place, unnormalised, e^{+i k x}

  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  ~Fft();

 private:
  explicit Fft(int n);
  int n_;
  void* fwd_;
  void* bwd_;
};

// In-place transforms over Eigen containers.  "forward" is unnormalised;
// "backward" divides by the length so backward(forward(x)) == x.
void fft_forward(Eigen::VectorXcd& v);
void fft_backward(Eigen::VectorXcd& v);

/// Transform every column (dim 0) or every row (dim 1) of a matrix.
void fft_forward_cols(Eigen::MatrixXcd& m);
void fft_backward_cols(Eigen::MatrixXcd& m);
void fft_forward_rows(Eigen::MatrixXcd& m);
void fft_backward_rows(Eigen::MatrixXcd& m);

/// Spectral derivative of a real periodic grid function.
Eigen::VectorXd spectral_gradient(const Eigen::VectorXd& f, const SpatialGrid& grid);

/// Periodized convolution (V*f)(x_j) ~ dx * sum_k kernel(j-k) f(k), evaluated
/// by spectral multiplication.
Eigen::VectorXd periodic_convolve(const Eigen::VectorXd& kernel, const Eigen::VectorXd& f,
                                  const SpatialGrid& grid);

/// Band-limited interpolation of a real periodic grid function onto the
/// doubled grid (spacing dx/2); entry 2j equals f(j).
Eigen::VectorXd fourier_upsample2(const Eigen::VectorXd& f);

/// Same for a complex matrix, doubling both dimensions.
Eigen::MatrixXcd fourier_upsample2(const Eigen::MatrixXcd& m);

/// Shift a periodic grid function by s (spectral, exact for band-limited f).
Eigen::VectorXd spectral_shift(const Eigen::VectorXd& f, double s, double length);

}  // namespace hvl
