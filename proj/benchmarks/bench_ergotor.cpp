#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "ergotor/ergotor.hpp"

namespace {

using namespace ergotor;

FourierSeries random_series(std::size_t d, std::size_t terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<FourierSeries::Term> out;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<std::int64_t> m(d);
    for (auto& v : m) v = entry(rng);
    out.emplace_back(MultiIndex::dense(m), Complex(coef(rng), coef(rng)));
  }
  return FourierSeries(std::move(out));
}

void BM_Evaluate(benchmark::State& state) {
  const auto terms = static_cast<std::size_t>(state.range(0));
  const auto f = random_series(6, terms, 1);
  const TorusPoint theta({0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, theta));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_Evaluate)->RangeMultiplier(4)->Range(4, 1024);

void BM_TimeAverageAnalytic(benchmark::State& state) {
  const auto f = random_series(4, 64, 2);
  const auto lambda = FrequencySequence::generate(FrequencyFamily::kSqrtSquarefree, 4);
  const TorusPoint u({0.3, 0.1, 0.7, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(time_average_analytic(f, u, lambda, 1e3));
}
BENCHMARK(BM_TimeAverageAnalytic);

void BM_TimeAverageQuadrature(benchmark::State& state) {
  const auto f = random_series(3, 8, 3);
  const auto lambda = FrequencySequence::generate(FrequencyFamily::kSqrtSquarefree, 3);
  const TorusPoint u({0.3, 0.1, 0.7});
  const Observable h = [&](const TorusPoint& x) { return evaluate(f, x); };
  const double T = static_cast<double>(state.range(0));
  const double nu = max_oscillation(f, lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(time_average_quadrature(h, u, lambda, T, 1e-10, nu));
  }
}
BENCHMARK(BM_TimeAverageQuadrature)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OccupationSweep(benchmark::State& state) {
  const auto lambda = FrequencySequence::explicit_values({1.0, std::sqrt(2.0)});
  const auto box = JordanRegion::box({{0.0, 0.5}, {0.0, 0.5}});
  const double T = static_cast<double>(state.range(0));
  std::size_t events = 0;
  for (auto _ : state) {
    const auto r = occupation_measure(TorusPoint::zero(2), lambda, box, T);
    events = r.event_count;
    benchmark::DoNotOptimize(r.ratio);
  }
  state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_OccupationSweep)->RangeMultiplier(10)->Range(100, 100'000)
    ->Unit(benchmark::kMicrosecond);

void BM_Discrepancy(benchmark::State& state) {
  const auto lambda = FrequencySequence::explicit_values({1.0, std::sqrt(2.0)});
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(discrepancy_estimate(TorusPoint::zero(2), lambda, 2, T, 10));
  }
}
BENCHMARK(BM_Discrepancy)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_Independence(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto lambda = FrequencySequence::generate(FrequencyFamily::kSqrtSquarefree, d);
  for (auto _ : state) benchmark::DoNotOptimize(check_independence(lambda, 10, 1e-6));
}
BENCHMARK(BM_Independence)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_SelectRk(benchmark::State& state) {
  std::vector<FourierSeries::Term> terms;
  for (int n = 1; n <= 64; ++n) terms.emplace_back(MultiIndex::unit(n), std::ldexp(1.0, -n / 2));
  const FourierSeries f(std::move(terms));
  for (auto _ : state) benchmark::DoNotOptimize(select_rk(f, 8));
}
BENCHMARK(BM_SelectRk);

void BM_MonteCarlo(benchmark::State& state) {
  const auto f = random_series(4, 16, 4);
  const Observable h = [&](const TorusPoint& x) { return Complex(std::norm(evaluate(f, x))); };
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_space_integral(h, 4, n, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MonteCarlo)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
