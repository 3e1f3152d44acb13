#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "swe/experiments.hpp"

using namespace swe;

namespace {

Field random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field f(n);
  for (double& v : f) v = uni(rng);
  return f;
}

SbpOperatorPair bounded_pair(std::size_t n) {
  return build_operator_pair(Family::DP, 6, false, Grid1D::bounded(n - 1, 1.0));
}

void BM_Apply1DSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SbpOperatorPair pair = bounded_pair(n);
  const Field f = random_field(n, 1);
  Field out(n);
  for (auto _ : state) {
    pair.d_plus.apply_serial(f.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Apply1DOpenMP(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SbpOperatorPair pair = bounded_pair(n);
  const Field f = random_field(n, 1);
  Field out(n);
  for (auto _ : state) {
    pair.d_plus.apply(f.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepXLines(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Operators2D ops = Operators2D::periodic(Family::DP, 4, n, 1.0);
  const Field f = random_field(n * n, 2);
  Field out(n * n);
  for (auto _ : state) {
    sweep(n, Axis::X, f.data(), out.data(), [&](const double* a, double* b) { ops.x.d_plus.apply_serial(a, b); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_ApplyColumnsX(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Operators2D ops = Operators2D::periodic(Family::DP, 4, n, 1.0);
  const Field f = random_field(n * n, 2);
  Field out(n * n);
  for (auto _ : state) {
    ops.x.d_plus.apply_columns(f.data(), out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

State2D vortex_state(std::size_t n) { return merging_vortex_setup(Grid1D::periodic_grid(n, 2.0 * M_PI), {}); }

void rhs_2d_bench(benchmark::State& state, int threads) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rhs2DConfig cfg;
  cfg.g = 8.0;
  cfg.f_c = 8.0;
  cfg.ops = Operators2D::periodic(Family::DP, 4, n, 2.0 * M_PI);
  cfg.hv_x = HyperViscosity(cfg.ops.x, 4, 0.5);
  cfg.hv_y = HyperViscosity(cfg.ops.y, 4, 0.5);
  const State2D q = vortex_state(n);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : saved);
  for (auto _ : state) {
    State2D r = rhs_2d(q, cfg, 0.0);
    benchmark::DoNotOptimize(r.h.data());
  }
  omp_set_num_threads(saved);
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_Rhs2DSerial(benchmark::State& state) { rhs_2d_bench(state, 1); }
void BM_Rhs2DOpenMP(benchmark::State& state) { rhs_2d_bench(state, 0); }

}  // namespace

BENCHMARK(BM_Apply1DSerial)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Apply1DOpenMP)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_SweepXLines)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_ApplyColumnsX)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Rhs2DSerial)->Arg(128)->Arg(256);
BENCHMARK(BM_Rhs2DOpenMP)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
