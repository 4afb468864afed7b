// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <omp.h>

#include <random>

#include "fink/csp.hpp"
#include "fink/search.hpp"
#include "fink/stab.hpp"

using namespace fink;

namespace {

AvoidanceProblem g_problem(std::size_t n) {
  std::vector<std::vector<FinkElement>> points;
  return witness_problem(1, 1, n, 2, 2, points);
}

void BM_AvoidSerial(benchmark::State& state) {
  auto p = g_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(avoid_serial(p, 1'000'000'000));
}

void BM_AvoidParallel(benchmark::State& state) {
  auto p = g_problem(static_cast<std::size_t>(state.range(0)));
  int workers = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(avoid_parallel(p, 1'000'000'000, workers));
  state.counters["workers"] = workers;
}

std::vector<PosVector> net() { return positive_net(6, 6); }

void BM_OscillationSerial(benchmark::State& state) {
  auto pts = net();
  auto f = LipschitzFn::parse("dist:0=1,2=1/2,4=1/3");
  for (auto _ : state) benchmark::DoNotOptimize(oscillation_serial(f, pts));
}

void BM_OscillationParallel(benchmark::State& state) {
  auto pts = net();
  auto f = LipschitzFn::parse("dist:0=1,2=1/2,4=1/3");
  for (auto _ : state) benchmark::DoNotOptimize(oscillation(f, pts));
}

std::pair<PosVector, PosVector> profiles(std::size_t len) {
  std::mt19937_64 rng(17);
  auto make = [&] {
    std::map<std::size_t, Rational> c;
    for (std::size_t i = 0; i < len; ++i) c[i] = Rational(static_cast<long>(1 + rng() % 16), 16);
    for (auto& [_, v] : c) v.canonicalize();
    return PosVector(c);
  };
  auto x = make();
  return {x, make()};
}

void BM_DisReference(benchmark::State& state) {
  auto [x, y] = profiles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dis_reference(x, y));
}

void BM_DisBitset(benchmark::State& state) {
  auto [x, y] = profiles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dis(x, y));
}

}  // namespace

BENCHMARK(BM_AvoidSerial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AvoidParallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OscillationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OscillationParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DisReference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DisBitset)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
