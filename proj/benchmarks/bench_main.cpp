#include <benchmark/benchmark.h>

#include <cmath>
#include <string>
#include <vector>

#include "bounce/csv_io.hpp"
#include "bounce/portfolio.hpp"
#include "bounce/scoring.hpp"
#include "bounce/screener.hpp"
#include "bounce/simulation.hpp"

namespace {

using namespace bounce;

sim::SeedConfig universe_config(std::size_t securities) {
    auto cfg = sim::SeedConfig::defaults();
    cfg.n_securities = securities;
    return cfg;
}

const Dataset& sample_dataset() {
    static const Dataset d = sim::simulate_universe(universe_config(100));
    return d;
}

void BM_SimulateUniverse(benchmark::State& state) {
    const auto cfg = universe_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_universe(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 253);
}
BENCHMARK(BM_SimulateUniverse)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExportObservations(benchmark::State& state) {
    const auto& d = sample_dataset();
    for (auto _ : state) {
        auto obs = csv::observations_to_string(d);
        benchmark::DoNotOptimize(obs);
    }
}
BENCHMARK(BM_ExportObservations)->Unit(benchmark::kMillisecond);

void BM_ScoreTable(benchmark::State& state) {
    const auto& d = sample_dataset();
    const scoring::ScoreConfig cfg;
    const auto flavor = static_cast<scoring::Flavor>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(scoring::score_table(d, cfg, flavor));
}
BENCHMARK(BM_ScoreTable)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Rank(benchmark::State& state) {
    const auto rows = scoring::score_table(sample_dataset(), {}, scoring::Flavor::ma);
    for (auto _ : state) benchmark::DoNotOptimize(screen::rank(rows, 1, 20.0));
}
BENCHMARK(BM_Rank)->Unit(benchmark::kMicrosecond);

void BM_CapAndRedistribute(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> raw(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        raw[i] = std::pow(1.0 + static_cast<double>(i), -1.2);
        total += raw[i];
    }
    for (double& w : raw) w /= total;
    const double cap = 2.0 / static_cast<double>(n);
    for (auto _ : state) benchmark::DoNotOptimize(portfolio::cap_and_redistribute(raw, cap));
}
BENCHMARK(BM_CapAndRedistribute)->Arg(20)->Arg(1000);

}  // namespace
