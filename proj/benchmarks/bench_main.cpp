#include <benchmark/benchmark.h>

#include <random>

#include "jacring/ivhs.hpp"
#include "jacring/jacobian.hpp"
#include "jacring/linalg.hpp"
#include "jacring/poly.hpp"

using namespace jacring;

static void BM_Rref(benchmark::State& state) {
  const linalg::PrimeField f;
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = linalg::random_matrix(f, n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::rref_rank(f, m).rank);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rref)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);

static void BM_JacobianRing(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<unsigned>(state.range(1));
  const auto strategy = state.range(2) ? jacobian::Strategy::Koszul : jacobian::Strategy::Direct;
  auto ctx = poly::RingContext::create(n, d);
  std::mt19937_64 rng(2);
  const auto f = poly::random_form(ctx, d, rng);
  for (auto _ : state) {
    jacobian::JacobianRing jr(f, {}, strategy);
    benchmark::DoNotOptimize(jr.certificate().smooth);
  }
}
BENCHMARK(BM_JacobianRing)
    ->ArgNames({"n", "d", "koszul"})
    ->Args({2, 5, 0})
    ->Args({2, 5, 1})
    ->Args({4, 4, 0})
    ->Args({4, 4, 1})
    ->Args({4, 5, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_Symmetrizer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<unsigned>(state.range(1));
  const auto k = static_cast<unsigned>(state.range(2)), kp = static_cast<unsigned>(state.range(3));
  auto ctx = poly::RingContext::create(n, d);
  std::mt19937_64 rng(3);
  jacobian::JacobianRing jr(poly::random_form(ctx, d, rng));
  const auto mu = jr.multiplication_tensor(k, kp);
  for (auto _ : state) benchmark::DoNotOptimize(ivhs::symmetrizer(jr.field(), mu).dim());
}
BENCHMARK(BM_Symmetrizer)
    ->ArgNames({"n", "d", "k", "kprime"})
    ->Args({2, 5, 2, 5})
    ->Args({4, 4, 1, 3})
    ->Args({4, 4, 3, 4})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
