#include <benchmark/benchmark.h>

#include "boltz/fourier.hpp"
#include "boltz/measure.hpp"
#include "boltz/simulator.hpp"

using namespace boltz;

namespace
{
SimConfig bench_config(std::size_t n, Scheme scheme)
{
    SimConfig cfg;
    cfg.n_particles = n;
    cfg.t_end = 1;
    cfg.cross_section = {.gamma = 0.5, .nu = 0.5, .k = 10.0};
    cfg.dt = 0.09 / candidate_rate(cfg.cross_section);
    cfg.scheme = scheme;
    cfg.threads = 1;
    cfg.snapshot_times = {0};
    return cfg;
}

std::vector<Vec3> normal_cloud(std::size_t n)
{
    CounterStream rng(3, 0);
    std::vector<Vec3> pts(n);
    for (Vec3& p : pts)
    {
        double const x = rng.normal();
        double const y = rng.normal();
        double const z = rng.normal();
        p = {x, y, z};
    }
    return pts;
}

void BM_step(benchmark::State& state)
{
    auto const scheme = state.range(1) == 0 ? Scheme::nanbu : Scheme::symmetric_pair;
    SimConfig const cfg = bench_config(static_cast<std::size_t>(state.range(0)), scheme);
    ParticleSystem sys = init_system(InitialLaw::gaussian({}, 1), cfg);
    std::uint64_t accepted = 0;
    for (auto _ : state)
        accepted += step(sys, cfg.dt, cfg).accepted;
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["accepted_per_step"] = benchmark::Counter(
        static_cast<double>(accepted), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_step)->Args({10000, 0})->Args({10000, 1})->Args({100000, 0})->Unit(benchmark::kMillisecond);

void BM_psi(benchmark::State& state)
{
    std::vector<Snapshot> bg(3);
    for (std::size_t i = 0; i < bg.size(); ++i)
    {
        bg[i].t = 0.9 + 0.05 * static_cast<double>(i);
        bg[i].measure = EmpiricalMeasure(normal_cloud(static_cast<std::size_t>(state.range(0))));
    }
    LevyCtx ctx;
    ctx.background = bg;
    ctx.cs = {.gamma = 0.5, .nu = 0.5};
    ctx.phi_rule = PhiRule::bessel;
    ctx.estimate_error = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(psi(ctx, {40, -20, 10}));
}
BENCHMARK(BM_psi)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_kde(benchmark::State& state)
{
    EmpiricalMeasure const m(normal_cloud(static_cast<std::size_t>(state.range(0))));
    GridSpec const grid = GridSpec::cube(-4, 4, 41);
    double const bw = silverman_bandwidth(m);
    for (auto _ : state)
        benchmark::DoNotOptimize(kde_density(m, bw, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_kde)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
