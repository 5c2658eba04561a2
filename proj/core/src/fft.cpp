#include "hvlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace hvl {

namespace {
std::mutex g_plan_mutex;
}

Fft::Fft(int n) : n_(n) {
  fftw_complex* buf = fftw_alloc_complex(n);
  fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
}

Fft::~Fft() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

const Fft& Fft::of(int n) {
  static std::map<int, std::unique_ptr<Fft>> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& slot = cache[n];
  if (!slot) slot.reset(new Fft(n));
  return *slot;
}

void Fft::forward(Complex* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(Complex* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

void fft_forward(Eigen::VectorXcd& v) { Fft::of(v.size()).forward(v.data()); }

void fft_backward(Eigen::VectorXcd& v) {
  Fft::of(v.size()).backward(v.data());
  v /= static_cast<double>(v.size());
}

void fft_forward_cols(Eigen::MatrixXcd& m) {
  const Fft& f = Fft::of(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) f.forward(m.col(c).data());
}

void fft_backward_cols(Eigen::MatrixXcd& m) {
  const Fft& f = Fft::of(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) f.backward(m.col(c).data());
  m /= static_cast<double>(m.rows());
}

void fft_forward_rows(Eigen::MatrixXcd& m) {
  const Fft& f = Fft::of(m.cols());
  Eigen::VectorXcd buf(m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    buf = m.row(r).transpose();
    f.forward(buf.data());
    m.row(r) = buf.transpose();
  }
}

void fft_backward_rows(Eigen::MatrixXcd& m) {
  const Fft& f = Fft::of(m.cols());
  Eigen::VectorXcd buf(m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    buf = m.row(r).transpose();
    f.backward(buf.data());
    m.row(r) = buf.transpose() / static_cast<double>(m.cols());
  }
}

Eigen::VectorXd spectral_gradient(const Eigen::VectorXd& f, const SpatialGrid& grid) {
  const int n = grid.npoints;
  Eigen::VectorXcd c = f.cast<Complex>();
  fft_forward(c);
  for (int j = 0; j < n; ++j) {
    if (j == n / 2) {
      c(j) = 0.0;  // odd derivative kills the Nyquist mode
    } else {
      c(j) *= Complex(0.0, grid.wavenumber(j));
    }
  }
  fft_backward(c);
  return c.real();
}

Eigen::VectorXd periodic_convolve(const Eigen::VectorXd& kernel, const Eigen::VectorXd& f,
                                  const SpatialGrid& grid) {
  Eigen::VectorXcd kc = kernel.cast<Complex>();
  Eigen::VectorXcd fc = f.cast<Complex>();
  fft_forward(kc);
  fft_forward(fc);
  kc.array() *= fc.array();
  fft_backward(kc);
  return kc.real() * grid.spacing();
}

Eigen::VectorXd fourier_upsample2(const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size());
  Eigen::VectorXcd c = f.cast<Complex>();
  fft_forward(c);
  Eigen::VectorXcd pad = Eigen::VectorXcd::Zero(2 * n);
  for (int j = 0; j < n; ++j) {
    if (j < n / 2) {
      pad(j) = c(j);
    } else if (j == n / 2) {
      pad(n / 2) = 0.5 * c(j);
      pad(2 * n - n / 2) = 0.5 * c(j);
    } else {
      pad(2 * n - (n - j)) = c(j);
    }
  }
  fft_backward(pad);
  return (pad.real() * 2.0);
}

Eigen::MatrixXcd fourier_upsample2(const Eigen::MatrixXcd& m) {
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  Eigen::MatrixXcd spec = m;
  fft_forward_cols(spec);
  fft_forward_rows(spec);

  // Spread one dimension's spectrum into the doubled index set, splitting the
  // Nyquist bin symmetrically.
  auto targets = [](int j, int n) {
    struct T {
      int idx[2];
      double w[2];
      int count;
    } t{};
    if (j < n / 2) {
      t.idx[0] = j;
      t.w[0] = 1.0;
      t.count = 1;
    } else if (j == n / 2) {
      t.idx[0] = n / 2;
      t.idx[1] = 2 * n - n / 2;
      t.w[0] = t.w[1] = 0.5;
      t.count = 2;
    } else {
      t.idx[0] = 2 * n - (n - j);
      t.w[0] = 1.0;
      t.count = 1;
    }
    return t;
  };

  Eigen::MatrixXcd pad = Eigen::MatrixXcd::Zero(2 * r, 2 * c);
  for (int i = 0; i < r; ++i) {
    const auto ti = targets(i, r);
    for (int j = 0; j < c; ++j) {
      const auto tj = targets(j, c);
      for (int a = 0; a < ti.count; ++a)
        for (int b = 0; b < tj.count; ++b) pad(ti.idx[a], tj.idx[b]) += ti.w[a] * tj.w[b] * spec(i, j);
    }
  }
  fft_backward_cols(pad);
  fft_backward_rows(pad);
  return pad * 4.0;
}

Eigen::VectorXd spectral_shift(const Eigen::VectorXd& f, double s, double length) {
  if (s == 0.0) return f;  // exact identity, do not touch the Nyquist mode
  const int n = static_cast<int>(f.size());
  Eigen::VectorXcd c = f.cast<Complex>();
  fft_forward(c);
  const double pi = 3.14159265358979323846;
  for (int j = 0; j < n; ++j) {
    const int p = (j <= n / 2 - 1) ? j : j - n;
    const double k = 2.0 * pi * p / length;
    if (j == n / 2) {
      // project the Nyquist mode out: a phase would make the result complex,
      // and the cosine alternative does not compose across repeated shifts
      c(j) = 0.0;
    } else {
      c(j) *= std::exp(Complex(0.0, -k * s));
    }
  }
  fft_backward(c);
  return c.real();
}

}  // namespace hvl
