#include <benchmark/benchmark.h>

#include "agp/agp_analytic.hpp"
#include "agp/montecarlo.hpp"
#include "agp/warranty.hpp"

namespace {

agp::AgpModel paper_model() {
  return agp::AgpModel(agp::GeometricProcess(agp::Distribution::exponential(0.0055), 1.1),
                       agp::GeometricProcess(agp::Distribution::exponential(0.01), 0.95));
}

// Cold-cache NRFRW cost: builds the convolution tower up to T.
void BM_NrfrwAnalytic(benchmark::State& state) {
  const double T = 1460.0;
  const agp::Grid grid{T, T / static_cast<double>(state.range(0))};
  for (auto _ : state) {
    const agp::AgpAnalytic an(paper_model(), grid);
    benchmark::DoNotOptimize(agp::expected_cost_nrfrw(an, {1.0, 1.0}, T).cost);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NrfrwAnalytic)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNSquared);

void BM_StieltjesConvolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const agp::Grid grid{1.0, 1.0 / static_cast<double>(n)};
  const agp::GeometricProcess gp(agp::Distribution::gamma(2.0, 0.1), 1.0);
  const auto kernel = agp::cell_average_cdf(gp, 1, grid);
  std::vector<double> measure(n + 1);
  for (std::size_t k = 0; k <= n; ++k) measure[k] = gp.cdf(1, grid.t(k));
  std::vector<double> out;
  for (auto _ : state) {
    out.clear();
    agp::stieltjes_convolve(measure, kernel, 1, n, 0, n + 1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * static_cast<long>(n) / 2);
}
BENCHMARK(BM_StieltjesConvolve)->RangeMultiplier(4)->Range(1024, 16384);

void BM_XiRestricted(benchmark::State& state) {
  const double T = 1460.0;
  const agp::Grid grid{6.0 * T, T / 1024.0};
  for (auto _ : state) {
    const agp::AgpAnalytic an(paper_model(), grid);
    benchmark::DoNotOptimize(an.restricted_renewing_xi_cdf(T, 5).at(1825.0));
  }
}
BENCHMARK(BM_XiRestricted)->Unit(benchmark::kMillisecond);

void BM_NrfrwReplications(benchmark::State& state) {
  const auto model = paper_model();
  const agp::SimConfig cfg{10'000, 1, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    const auto e = agp::estimate(
        [&](std::size_t, std::uint64_t key) {
          agp::Trajectory tr(model, agp::ItemStream(key));
          return agp::nrfrw_cost(tr, {1.0, 1.0}, 1460.0);
        },
        cfg);
    benchmark::DoNotOptimize(e.mean);
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_NrfrwReplications)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LifeCycleReplications(benchmark::State& state) {
  const auto model = paper_model();
  const agp::SimConfig cfg{2'000, 1, 1};
  for (auto _ : state) {
    const auto e = agp::estimate(
        [&](std::size_t, std::uint64_t key) {
          return agp::life_cycle_cost(model, {1.0, 1.0}, agp::Rrfrw{1460.0, 5}, 4380.0, key).cost;
        },
        cfg);
    benchmark::DoNotOptimize(e.mean);
  }
  state.SetItemsProcessed(state.iterations() * 2'000);
}
BENCHMARK(BM_LifeCycleReplications)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
