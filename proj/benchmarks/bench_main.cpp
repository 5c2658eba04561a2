#include <benchmark/benchmark.h>

#include "hvlab/config.hpp"
#include "hvlab/density_matrix.hpp"
#include "hvlab/linalg.hpp"
#include "hvlab/potential.hpp"
#include "hvlab/transforms.hpp"

namespace {

hvl::RunContext make_ctx(double hbar, int nx) {
  hvl::RunConfig cfg;
  cfg.hbar_list = {hbar};
  cfg.grid_length = 10.0;
  cfg.nx = nx;
  return hvl::build_run(cfg, hbar);
}

hvl::DensityMatrix make_state(const hvl::RunContext& ctx) {
  hvl::InitialSpec init;
  init.sigma_x = 1.5;
  init.sigma_v = 0.7;
  init.taper_v1 = 0.55;
  init.taper_v2 = 0.8;
  return hvl::build_mixed_state(init, ctx);
}

void BM_hartree_step(benchmark::State& state) {
  const auto ctx = make_ctx(1.0 / 16.0, static_cast<int>(state.range(0)));
  auto w = make_state(ctx);
  const auto pot = hvl::RadialPotential::gaussian(1.0);
  const Eigen::VectorXd kernel = hvl::periodized_kernel(pot, ctx.grid, 0.0);
  for (auto _ : state) {
    w = hvl::hartree_step(w, 1e-3, kernel, ctx.convention);
    benchmark::DoNotOptimize(w.m.data());
  }
}
BENCHMARK(BM_hartree_step)->Arg(128)->Arg(256);

void BM_wigner(benchmark::State& state) {
  const auto ctx = make_ctx(1.0 / 16.0, static_cast<int>(state.range(0)));
  const auto w = make_state(ctx);
  for (auto _ : state) {
    auto f = hvl::wigner(w);
    benchmark::DoNotOptimize(f.values.data());
  }
}
BENCHMARK(BM_wigner)->Arg(128)->Arg(256);

void BM_trace_norm(benchmark::State& state) {
  const auto ctx = make_ctx(1.0 / 16.0, static_cast<int>(state.range(0)));
  const auto w = make_state(ctx);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hvl::hermitian_trace_norm(w.m));
  }
}
BENCHMARK(BM_trace_norm)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
