#include <random>

#include <benchmark/benchmark.h>

#include "adrc/numkernel.hpp"
#include "adrc/sim.hpp"
#include "adrc/stability.hpp"

using namespace adrc;

namespace {

Matrix hurwitz(int d) {
  std::mt19937_64 rng(static_cast<unsigned>(d));
  std::normal_distribution<double> g;
  Matrix r(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r(i, j) = g(rng);
  return r - (spectral_abscissa(r) + 0.5) * Matrix::Identity(d, d);
}

void BM_SolveLyapunov(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix h = hurwitz(d);
  const Matrix m = Matrix::Identity(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(h, m));
}
BENCHMARK(BM_SolveLyapunov)->DenseRange(2, 8, 2);

void BM_Certificate(benchmark::State& state) {
  const CertificateProblem p = example1_problem(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(check_theorem2(p.model, p.law, p.L, p.bounds));
}
BENCHMARK(BM_Certificate);

void BM_CertificateSweep(benchmark::State& state) {
  std::vector<double> ks;
  for (int i = 1; i <= 60; ++i) ks.push_back(0.1 * i);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_certificates(example1_problem, ks));
}
BENCHMARK(BM_CertificateSweep)->Unit(benchmark::kMillisecond);

void BM_ClosedLoop(benchmark::State& state, const char* name) {
  const Scenario s = *builtin_scenario(name);
  for (auto _ : state) benchmark::DoNotOptimize(run_closed_loop(s));
}
BENCHMARK_CAPTURE(BM_ClosedLoop, example1, "example1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ClosedLoop, pendulum_b1, "pendulum-b1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ClosedLoop, pendulum_b2, "pendulum-b2")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
