// Serial reference vs OpenMP kernels, plus one full solver step.
//
//   ./bench_kernels --benchmark_filter=crank
//   DIVFREE_THREADS is ignored here; thread count is a benchmark argument.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "divfree/fft.hpp"
#include "divfree/kernels.hpp"
#include "divfree/ns_solver.hpp"

namespace {

using divfree::Complex;
using divfree::Grid;
namespace k = divfree::kernels;

std::vector<Complex> random_coeffs(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<Complex> out(n);
  for (auto& c : out) c = {d(rng), d(rng)};
  return out;
}

std::vector<double> random_reals(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

// Args: grid size, threads (0 = serial reference).
void apply_threads(benchmark::State& state) {
  if (state.range(1) > 0) k::set_thread_count(static_cast<int>(state.range(1)));
}

void BM_Leray(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  apply_threads(state);
  auto u = random_coeffs(g.size(), 1), v = random_coeffs(g.size(), 2);
  for (auto _ : state) {
    if (state.range(1) == 0)
      k::serial::leray_modes(g, u, v);
    else
      k::omp::leray_modes(g, u, v);
    benchmark::DoNotOptimize(u.data());
  }
}

void BM_CrankNicolson(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  apply_threads(state);
  const auto w = random_coeffs(g.size(), 3), rhs = random_coeffs(g.size(), 4);
  std::vector<Complex> out(g.size());
  for (auto _ : state) {
    if (state.range(1) == 0)
      k::serial::crank_nicolson(g, 1e-3, 1e-3, w, rhs, out);
    else
      k::omp::crank_nicolson(g, 1e-3, 1e-3, w, rhs, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Advection(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  apply_threads(state);
  const auto u = random_reals(g.size(), 5), v = random_reals(g.size(), 6);
  const auto wx = random_reals(g.size(), 7), wy = random_reals(g.size(), 8);
  std::vector<double> out(g.size());
  for (auto _ : state) {
    if (state.range(1) == 0)
      k::serial::advection(u, v, wx, wy, out);
    else
      k::omp::advection(u, v, wx, wy, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Dot(benchmark::State& state) {
  const Grid g(static_cast<int>(state.range(0)));
  apply_threads(state);
  const auto a = random_reals(g.size(), 9), b = random_reals(g.size(), 10);
  for (auto _ : state) {
    double r = state.range(1) == 0 ? k::serial::dot(g, a, b) : k::omp::dot(g, a, b);
    benchmark::DoNotOptimize(r);
  }
}

void BM_SolverStep(benchmark::State& state) {
  divfree::SolverConfig cfg;
  cfg.grid = Grid(static_cast<int>(state.range(0)));
  k::set_thread_count(static_cast<int>(state.range(1)));
  divfree::VorticityStepper stepper(cfg);
  auto omega = divfree::forward_fft2(divfree::initial_vorticity(cfg));
  std::size_t i = 0;
  for (auto _ : state) {
    omega = stepper.step(omega, i++);
    benchmark::DoNotOptimize(omega.coeffs().data());
  }
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int n : {64, 256, 1024})
    for (int t : {0, 1, 2, 4}) b->Args({n, t});
  b->ArgNames({"n", "threads"});
}

}  // namespace

BENCHMARK(BM_Leray)->Apply(kernel_args);
BENCHMARK(BM_CrankNicolson)->Apply(kernel_args);
BENCHMARK(BM_Advection)->Apply(kernel_args);
BENCHMARK(BM_Dot)->Apply(kernel_args);
BENCHMARK(BM_SolverStep)->Args({64, 1})->Args({64, 4})->Args({256, 1})->Args({256, 4})->ArgNames({"n", "threads"});

BENCHMARK_MAIN();
