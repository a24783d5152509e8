// Serial reference vs OpenMP kernels: fading-grid policy moments and
// Monte Carlo collision trials.

#include <benchmark/benchmark.h>

#include "cogra/fading.hpp"
#include "cogra/mcsim.hpp"
#include "cogra/policy.hpp"

namespace {

using namespace cogra;

void policy_moments_bench(benchmark::State& state, Exec exec) {
    const FadingGrid grid = FadingGrid::build(static_cast<int>(state.range(0)));
    PolicyParams p;
    p.alpha = 1.0;
    p.lambda = 0.2;
    p.nu = 0.5;
    p.pc = 0.11;
    ChannelConstants consts;
    PowerConstraints limits;
    limits.p_avg = 10.0;
    for (auto _ : state) {
        const PolicyMoments m = optimal_policy_moments(p, grid, consts, limits, exec);
        benchmark::DoNotOptimize(m.mean_power);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void collision_trials_bench(benchmark::State& state, Exec exec) {
    SimConfig cfg;
    cfg.trials = static_cast<std::size_t>(state.range(0));
    cfg.seed = 7;
    cfg.start = StartState::Stationary;
    cfg.exec = exec;
    const TrafficModel traffic = TrafficModel::voip();
    for (auto _ : state) {
        const SimEstimate e = simulate_collision(traffic, 107.21, 7.21, cfg);
        benchmark::DoNotOptimize(e.mean);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(policy_moments_bench, serial, Exec::Serial)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(policy_moments_bench, parallel, Exec::Parallel)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(collision_trials_bench, serial, Exec::Serial)->Arg(100000);
BENCHMARK_CAPTURE(collision_trials_bench, parallel, Exec::Parallel)->Arg(100000);

BENCHMARK_MAIN();
