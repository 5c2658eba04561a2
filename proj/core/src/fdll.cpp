#include "hvlab/fdll.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hvl {

namespace {

constexpr double kPi = 3.14159265358979323846;

using boost::math::quadrature::gauss_kronrod;

double raw_weight(const RadialPotential& v, int n, double r) {
  if (r <= 0.0) throw std::invalid_argument("weight: radius must be positive");
  // Two balls of radius r at separation d overlap iff d < 2r, so the
  // derivatives of V enter at argument 2r. Differentiating
  //   V(d) = int_{d/2}^inf g(r) |B_r cap B_r|(d) dr
  // twice in d gives V''(d) = (pi d / 2) int_{d/2}^inf g (n = 3) and an Abel
  // equation (n = 2); the expressions below are their exact inversions, so no
  // calibration constant is needed in principle.
  if (n == 3) {
    return 1.0 / (kPi * r * r) * (v.derivative(2.0 * r, 2) - 2.0 * r * v.derivative(2.0 * r, 3));
  }
  if (n == 2) {
    // -(4/pi) int_0^inf V'''(2 r cosh u) cosh u du
    boost::math::quadrature::exp_sinh<double> integrator;
    auto f = [&](double u) {
      const double c = std::cosh(u);
      return v.derivative(2.0 * r * c, 3) * c;
    };
    double err = 0.0;
    const double val = integrator.integrate(f, 1e-10, &err);
    if (!std::isfinite(val)) {
      std::ostringstream os;
      os << "weight: s-integral does not converge at radius " << r;
      throw std::runtime_error(os.str());
    }
    return -4.0 / kPi * val;
  }
  throw std::invalid_argument("weight: only dimensions 2 and 3 are supported");
}

double raw_indicator(const FdlLWeight& w, double d) {
  // int_{d/2}^inf g(r) lens(r, d) dr via u = d/(2r), exact on the half line
  auto f = [&](double u) {
    const double r = d / (2.0 * u);
    return w.raw(r) * ball_intersection_volume(w.dimension, r, d) * d / (2.0 * u * u);
  };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 12, 1e-11);
}

}  // namespace

double ball_intersection_volume(int n, double r, double d) {
  if (r <= 0.0) throw std::invalid_argument("ball_intersection_volume: radius must be positive");
  if (d < 0.0) throw std::invalid_argument("ball_intersection_volume: separation must be >= 0");
  if (d >= 2.0 * r) return 0.0;
  if (n == 3) return kPi / 12.0 * (4.0 * r + d) * (2.0 * r - d) * (2.0 * r - d);
  if (n == 2)
    return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
  throw std::invalid_argument("ball_intersection_volume: only n = 2, 3 supported");
}

FdlLWeight compute_weight(const RadialPotential& v, int n, double r_min, double r_max,
                          int points_per_decade) {
  if (n != 2 && n != 3) throw std::invalid_argument("compute_weight: only n = 2, 3 supported");
  if (!(r_min > 0.0 && r_max > r_min)) throw std::invalid_argument("compute_weight: bad radius range");
  if (points_per_decade < 2) throw std::invalid_argument("compute_weight: too few points");

  FdlLWeight w;
  w.dimension = n;
  w.raw = [v, n](double r) { return raw_weight(v, n, r); };
  w.potential = [v](double d) { return v(d); };

  const double decades = std::log10(r_max / r_min);
  const int npts = static_cast<int>(std::lround(decades * points_per_decade)) + 1;
  w.radii.resize(npts);
  w.values.resize(npts);
  for (int i = 0; i < npts; ++i) {
    const double r = r_min * std::pow(10.0, decades * i / (npts - 1));
    w.radii(i) = r;
    w.values(i) = w.raw(r);
    if (!std::isfinite(w.values(i))) {
      std::ostringstream os;
      os << "compute_weight: weight not finite at radius " << r;
      throw std::runtime_error(os.str());
    }
  }

  // single multiplicative constant, least squares over 32 probe separations
  constexpr int kProbes = 32;
  double num = 0.0, den = 0.0;
  std::array<double, kProbes> rec{}, val{};
  for (int i = 0; i < kProbes; ++i) {
    const double d = 0.2 * std::pow(25.0, static_cast<double>(i) / (kProbes - 1));
    rec[i] = raw_indicator(w, d);
    val[i] = v(d);
    num += rec[i] * val[i];
    den += rec[i] * rec[i];
  }
  w.calibration = den > 0.0 ? num / den : 1.0;
  w.validity = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    if (val[i] != 0.0)
      w.validity = std::max(w.validity, std::abs(w.calibration * rec[i] - val[i]) / std::abs(val[i]));
  }
  return w;
}

double reconstruct_indicator(const FdlLWeight& w, double d) {
  if (d <= 0.0) throw std::invalid_argument("reconstruct_indicator: separation must be positive");
  if (d >= 2.0 * w.radii(w.radii.size() - 1))
    throw std::out_of_range("reconstruct_indicator: separation beyond tabulated radii");
  return w.calibration * raw_indicator(w, d);
}

GaussianReconstruction reconstruct_gaussian(const FdlLWeight& w, double d, GaussianForm form) {
  if (d <= 0.0) throw std::invalid_argument("reconstruct_gaussian: separation must be positive");
  const int n = w.dimension;

  auto integrand = [&](double r) -> double {
    const double arg = form == GaussianForm::reduced ? 2.0 * d * d / (r * r)
                                                     : 0.5 * d * d / (r * r);
    if (arg > 700.0) return 0.0;  // weight may overflow where the exponential underflows
    const double damp = std::exp(-arg);
    if (form == GaussianForm::full)
      return w.g(r) * std::pow(0.5 * kPi * r * r, 0.5 * n) * damp;
    return w.g(r) * r * r * r * damp;
  };

  const double split = std::max(d, 1.0);
  const double head = gauss_kronrod<double, 61>::integrate(integrand, 0.0, split, 12, 1e-11);
  auto tail_f = [&](double u) { return integrand(split / u) * split / (u * u); };
  const double tail = gauss_kronrod<double, 61>::integrate(tail_f, 0.0, 1.0, 12, 1e-11);

  GaussianReconstruction out;
  out.value = 4.0 / kPi * (head + tail);
  const double truth = w.potential ? w.potential(d) : 0.0;
  out.deviation = truth != 0.0 ? (out.value - truth) / truth : out.value;
  return out;
}

}  // namespace hvl
