#include "hvlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hvlab/fft.hpp"
#include "hvlab/linalg.hpp"

namespace hvl {

namespace {

// offsets of grid nodes inside a centred ball of the given radius, flattened
// with the same row-major nesting as DensityMatrix
std::vector<int> ball_offsets(const SpatialGrid& grid, int dimension, double radius) {
  const int n = grid.npoints;
  const double dx = grid.spacing();
  std::vector<int> offs;
  const int reach = std::min(n / 2, static_cast<int>(std::floor(radius / dx)));
  if (dimension == 1) {
    for (int o = -reach; o <= reach; ++o)
      if (std::abs(o) * dx <= radius) offs.push_back((o + n) % n);
  } else if (dimension == 3) {
    for (int a = -reach; a <= reach; ++a)
      for (int b = -reach; b <= reach; ++b)
        for (int c = -reach; c <= reach; ++c) {
          const double d2 = (a * a + b * b + c * c) * dx * dx;
          if (d2 <= radius * radius)
            offs.push_back((((a + n) % n) * n + (b + n) % n) * n + (c + n) % n);
        }
  } else {
    throw std::invalid_argument("hl_maximal: dimensions 1 and 3 supported");
  }
  return offs;
}

Eigen::VectorXd maximal_over_radii(const Eigen::VectorXd& f, const SpatialGrid& grid,
                                   int dimension, const std::vector<double>& radii) {
  const int n = grid.npoints;
  const int total = static_cast<int>(f.size());
  Eigen::VectorXd clipped = f.cwiseMax(0.0);
  Eigen::VectorXd best = Eigen::VectorXd::Constant(total, 0.0);

  for (double radius : radii) {
    const std::vector<int> offs = ball_offsets(grid, dimension, radius);
    const double inv = 1.0 / static_cast<double>(offs.size());
    for (int z = 0; z < total; ++z) {
      double sum = 0.0;
      if (dimension == 1) {
        for (int o : offs) sum += clipped((z + o) % n);
      } else {
        const int z1 = z / (n * n), z2 = (z / n) % n, z3 = z % n;
        for (int o : offs) {
          const int o1 = o / (n * n), o2 = (o / n) % n, o3 = o % n;
          sum += clipped((((z1 + o1) % n) * n + (z2 + o2) % n) * n + (z3 + o3) % n);
        }
      }
      best(z) = std::max(best(z), sum * inv);
    }
  }
  return best;
}

int flat_size(const SpatialGrid& grid, int dimension) {
  int s = 1;
  for (int a = 0; a < dimension; ++a) s *= grid.npoints;
  return s;
}

}  // namespace

Eigen::VectorXd hl_maximal(const Eigen::VectorXd& f, const SpatialGrid& grid, int dimension) {
  if (f.size() != flat_size(grid, dimension))
    throw std::invalid_argument("hl_maximal: array size does not match the grid");
  std::vector<double> radii{0.0};
  for (double r = grid.spacing(); r <= 0.5 * grid.length; r *= 2.0) radii.push_back(r);
  return maximal_over_radii(f, grid, dimension, radii);
}

Eigen::VectorXd hl_maximal_all_radii(const Eigen::VectorXd& f, const SpatialGrid& grid,
                                     int dimension) {
  if (f.size() != flat_size(grid, dimension))
    throw std::invalid_argument("hl_maximal: array size does not match the grid");
  std::vector<double> radii{0.0};
  for (int k = 1; k * grid.spacing() <= 0.5 * grid.length; ++k)
    radii.push_back(k * grid.spacing());
  return maximal_over_radii(f, grid, dimension, radii);
}

Lemma3Result lemma3_check(const DensityMatrix& w, double delta,
                          const std::vector<double>& radii,
                          const std::vector<std::vector<double>>& centers, bool report_only) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("lemma3_check: delta must lie in (0, 1/2)");
  if (w.dimension != 3 && !report_only)
    throw std::invalid_argument(
        "lemma3_check: the bound's exponents are three-dimensional; use report-only mode "
        "elsewhere");

  const int n = w.size();
  const int d = w.dimension;

  // per-axis absolute-commutator densities and their maximal functions
  std::vector<Eigen::VectorXd> rho(d), rho_star(d);
  std::vector<double> l1(d);
  for (int axis = 0; axis < d; ++axis) {
    CommutatorDensity cd = commutator_density(w, axis);
    rho[axis] = cd.rho_abs;
    l1[axis] = cd.l1;
    rho_star[axis] = hl_maximal(cd.rho_abs, w.grid, d);
  }

  Lemma3Result out;
  out.report_only = report_only;
  for (double r : radii) {
    for (const auto& z : centers) {
      if (static_cast<int>(z.size()) != d)
        throw std::invalid_argument("lemma3_check: centre dimension mismatch");

      // multiplication operator by the Gaussian bump, periodic distance
      Eigen::VectorXd chi(n);
      for (int i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double dz = w.grid.minimal_image(w.coordinate(i, a) - z[a]);
          d2 += dz * dz;
        }
        chi(i) = std::exp(-d2 / (r * r));
      }
      Eigen::MatrixXcd comm = chi.asDiagonal() * w.m - w.m * Eigen::MatrixXcd(chi.asDiagonal());
      const double lhs = antihermitian_trace_norm(comm);

      // nearest grid node to z
      int flat = 0;
      for (int a = 0; a < d; ++a) {
        int idx = static_cast<int>(std::lround((z[a] + 0.5 * w.grid.length) / w.grid.spacing()));
        idx = ((idx % w.grid.npoints) + w.grid.npoints) % w.grid.npoints;
        flat = flat * w.grid.npoints + idx;
      }

      double rhs = 0.0;
      for (int a = 0; a < d; ++a)
        rhs += std::pow(l1[a], 1.0 / 6.0 + delta) * std::pow(rho_star[a](flat), 5.0 / 6.0 - delta);
      rhs *= std::pow(r, 1.5 - 3.0 * delta);

      Lemma3Sample s;
      s.r = r;
      s.z = z;
      s.lhs = lhs;
      s.rhs = rhs;
      s.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
      out.samples.push_back(std::move(s));
    }
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : out.samples) {
    if (s.ratio <= 0.0) continue;
    lo = std::min(lo, s.ratio);
    hi = std::max(hi, s.ratio);
  }
  out.fitted_c = hi;
  out.pass = !report_only && std::isfinite(hi) && hi > 0.0 && hi / lo < 3.0;
  return out;
}

std::vector<MonitorSample> assumption9_monitor(const std::vector<double>& times,
                                               const std::vector<DensityMatrix>& states,
                                               bool minimal_image) {
  if (times.size() != states.size())
    throw std::invalid_argument("assumption9_monitor: misaligned series");
  std::vector<MonitorSample> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const DensityMatrix& w = states[i];
    MonitorSample s;
    s.t = times[i];
    for (int axis = 0; axis < w.dimension; ++axis) {
      CommutatorDensity cd = commutator_density(w, axis, minimal_image);
      s.lhs += cd.l1 + cd.linf;
      if (cd.locality_warning) s.trusted = false;
    }
    s.rhs = static_cast<double>(w.n_particles) * w.hbar;
    s.ratio = s.lhs / s.rhs;
    out.push_back(std::move(s));
  }
  return out;
}

DuhamelReport duhamel_monitor(const std::vector<double>& times,
                              const std::vector<DensityMatrix>& hartree,
                              const std::vector<DensityMatrix>& vlasov_weyl,
                              const Eigen::VectorXd& kernel) {
  const std::size_t n = times.size();
  if (hartree.size() != n || vlasov_weyl.size() != n)
    throw std::invalid_argument("duhamel_monitor: misaligned checkpoints");
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i)
    if (!(hartree[i].grid == vlasov_weyl[i].grid))
      throw std::invalid_argument("duhamel_monitor: checkpoint grid mismatch");

  DuhamelReport rep;
  const double hbar = hartree[0].hbar;
  std::vector<double> dist(n);

  for (std::size_t i = 0; i < n; ++i) {
    const DensityMatrix& wt = vlasov_weyl[i];
    dist[i] = trace_norm_distance(hartree[i], wt);

    const Eigen::VectorXd drho = spatial_density(hartree[i]) - spatial_density(wt);
    const Eigen::VectorXd du = periodic_convolve(kernel, drho, wt.grid);
    Eigen::MatrixXcd comm =
        du.asDiagonal() * wt.m - wt.m * Eigen::MatrixXcd(du.asDiagonal());
    rep.commutator_terms.push_back(antihermitian_trace_norm(comm));

    const Eigen::VectorXd rho_t = spatial_density(wt);
    const Eigen::VectorXd u = periodic_convolve(kernel, rho_t, wt.grid);
    rep.remainder_terms.push_back(remainder_trace_norm(remainder_operator(wt, u)));

    MonitorSample p;
    p.t = times[i];
    p.lhs = rep.commutator_terms.back();
    p.rhs = hbar * dist[i];
    p.ratio = p.rhs > 0.0 ? p.lhs / p.rhs : 0.0;
    p.label = "prop1";
    rep.prop1.push_back(std::move(p));
  }

  // cumulative trapezoid of (commutator + remainder) / hbar
  double integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double dt = times[i] - times[i - 1];
      integral += 0.5 * dt *
                  (rep.commutator_terms[i] + rep.remainder_terms[i] +
                   rep.commutator_terms[i - 1] + rep.remainder_terms[i - 1]) /
                  hbar;
    }
    MonitorSample s;
    s.t = times[i];
    s.lhs = dist[i];
    s.rhs = integral;
    s.ratio = s.rhs > 0.0 ? s.lhs / s.rhs : 0.0;
    s.label = "duhamel";
    rep.inequality.push_back(std::move(s));
  }
  return rep;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("scaling_fit: need at least 4 points");
  const int n = static_cast<int>(points.size());
  Eigen::VectorXd lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (points[i].first <= 0.0 || points[i].second <= 0.0)
      throw std::invalid_argument("scaling_fit: values must be positive");
    lx(i) = std::log(points[i].first);
    ly(i) = std::log(points[i].second);
  }

  auto fit = [&](const Eigen::VectorXd& y) {
    const double mx = lx.mean(), my = y.mean();
    const double sxx = (lx.array() - mx).square().sum();
    const double sxy = ((lx.array() - mx) * (y.array() - my)).sum();
    const double slope = sxy / sxx;
    return std::pair<double, double>{slope, my - slope * mx};
  };

  ScalingFit out;
  auto [slope, intercept] = fit(ly);
  out.slope = slope;
  out.intercept = intercept;

  Eigen::VectorXd resid = ly - (lx.array() * slope + intercept).matrix();
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> pick(0, n - 1);
  constexpr int kBoot = 400;
  std::vector<double> slopes(kBoot);
  for (int b = 0; b < kBoot; ++b) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = slope * lx(i) + intercept + resid(pick(rng));
    slopes[b] = fit(y).first;
  }
  std::sort(slopes.begin(), slopes.end());
  out.slope_ci_low = slopes[static_cast<int>(0.025 * kBoot)];
  out.slope_ci_high = slopes[static_cast<int>(0.975 * kBoot) - 1];
  return out;
}

}  // namespace hvl
