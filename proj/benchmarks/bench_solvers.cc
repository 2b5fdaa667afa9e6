#include <lllmt/hypergraph_coloring.hh>
#include <lllmt/parallel.hh>
#include <lllmt/ramsey.hh>
#include <lllmt/sat.hh>
#include <lllmt/sequential.hh>
#include <lllmt/vcmep.hh>

#include <benchmark/benchmark.h>

#include <algorithm>

using namespace lllmt;

namespace {

void sequential_ksat(benchmark::State & state)
{
    auto cnf = random_balanced_ksat(static_cast<std::size_t>(state.range(0)), 6, 8, 3);
    auto build = ksat_build(cnf);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(build.instance, ++seed).stats.steps);
}

void parallel_coloring(benchmark::State & state, bool hybrid)
{
    auto g = random_uniform_hypergraph(static_cast<std::size_t>(state.range(0)), 6, state.range(0) / 2, 3, 5);
    auto build = hypergraph_build(g.vertex_count, g.edges, 2);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto r = hybrid ? run_hybrid(build.instance, ++seed) : run_full(build.instance, ++seed);
        benchmark::DoNotOptimize(r.rounds);
    }
}

void ramsey(benchmark::State & state)
{
    auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(ramsey_solve(n, 3, ++seed).coloring.size());
}

void packing(benchmark::State & state)
{
    CapacitatedHypergraph g;
    Stream rng(11, Purpose::generator, 0xbf);
    g.vertex_count = 200;
    g.capacity.assign(g.vertex_count, 3);
    for (std::int64_t f = 0; f < state.range(0); ++f) {
        std::vector<std::uint32_t> edge;
        while (edge.size() < 4) {
            auto v = static_cast<std::uint32_t>(rng.below(g.vertex_count));
            if (std::find(edge.begin(), edge.end(), v) == edge.end())
                edge.push_back(v);
        }
        std::sort(edge.begin(), edge.end());
        g.edges.push_back(edge);
    }
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(vcmep_parallel_sim(g, ++seed).packing.edges.size());
}

}

BENCHMARK(sequential_ksat)->Arg(200)->Arg(1000);
BENCHMARK_CAPTURE(parallel_coloring, full, false)->Arg(200)->Arg(800);
BENCHMARK_CAPTURE(parallel_coloring, hybrid, true)->Arg(200)->Arg(800);
BENCHMARK(ramsey)->Arg(20)->Arg(40);
BENCHMARK(packing)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
