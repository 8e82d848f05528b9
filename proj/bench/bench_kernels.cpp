// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "qreach/kernels.hpp"
#include "qreach/model.hpp"

namespace {

using namespace qreach;

Mat random_stable(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(d, d);
  for (double& x : a.data()) x = n(rng);
  a *= 0.9 / std::sqrt(lambda_max(a.transpose() * a));
  return a;
}

struct NuFixture {
  Mat a, q;
  Vec lin;
  InitialSet init;
};

NuFixture nu_fixture(std::size_t d) {
  std::mt19937_64 rng(1);
  NuFixture f{random_stable(rng, d), Mat::identity(d), Vec(d, 0.5),
              box_to_vertices(Vec(d, -1.0), Vec(d, 1.0))};
  return f;
}

template <auto Kernel>
void BM_NuSequence(benchmark::State& state) {
  const NuFixture f = nu_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(Kernel(f.a, f.init.vertices(), f.q, f.lin, 0.0, 500));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.init.size()) * 501);
}

void BM_LyapunovSolve(benchmark::State& state, Exec exec) {
  std::mt19937_64 rng(2);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const Mat a = random_stable(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_solve(a, Mat::identity(d), {}, exec));
}

BENCHMARK(BM_NuSequence<kernels::nu_sequence_serial>)->Name("nu_sequence/serial")->DenseRange(4, 10, 2);
BENCHMARK(BM_NuSequence<kernels::nu_sequence_omp>)->Name("nu_sequence/omp")->DenseRange(4, 10, 2);
BENCHMARK_CAPTURE(BM_LyapunovSolve, serial, Exec::serial)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK_CAPTURE(BM_LyapunovSolve, omp, Exec::parallel)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
