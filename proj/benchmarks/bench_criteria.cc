#include <lllmt/criteria.hh>
#include <lllmt/random.hh>
#include <lllmt/sat.hh>

#include <benchmark/benchmark.h>

using namespace lllmt;

namespace {

// Same family the acceptance checks draw from: up to 10 variables, 8 events, domains of 3.
auto random_instance(std::uint64_t seed) -> Instance
{
    Stream rng(seed, Purpose::generator, 0xbe);
    std::size_t n = 10;
    std::vector<std::vector<double>> probs;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t d = 2 + rng.below(2);
        probs.emplace_back(d, 1.0 / static_cast<double>(d));
    }
    VariableSpace space(probs);
    std::vector<BadEvent> events;
    while (events.size() < 8) {
        std::vector<Term> terms;
        for (VarId i = 0; i < n; ++i)
            if (rng.uniform() < 0.3)
                terms.push_back({i, static_cast<Value>(rng.below(space.domain_size(i)))});
        if (! terms.empty())
            events.emplace_back(terms);
    }
    return Instance(space, events);
}

void criterion_rhs(benchmark::State & state, CriterionKind kind)
{
    auto inst = random_instance(7);
    std::vector<double> mu(inst.event_count(), 0.3);
    Criterion c{kind};
    for (auto _ : state)
        for (EventId id = 0; id < inst.event_count(); ++id)
            benchmark::DoNotOptimize(rhs(inst, id, mu, c));
}

void ksat_fixed_point(benchmark::State & state)
{
    auto cnf = random_balanced_ksat(static_cast<std::size_t>(state.range(0)), 6, 8, 1);
    auto build = ksat_build(cnf);
    for (auto _ : state)
        benchmark::DoNotOptimize(ksat_clause_check(build));
}

}

BENCHMARK_CAPTURE(criterion_rhs, symmetric, CriterionKind::symmetric_lll);
BENCHMARK_CAPTURE(criterion_rhs, llll, CriterionKind::llll);
BENCHMARK_CAPTURE(criterion_rhs, blend, CriterionKind::blend_closed_form);
BENCHMARK_CAPTURE(criterion_rhs, orderable, CriterionKind::orderable_exact);
BENCHMARK_CAPTURE(criterion_rhs, assignable, CriterionKind::assignable_exact);
BENCHMARK(ksat_fixed_point)->Arg(100)->Arg(200)->Arg(400);

BENCHMARK_MAIN();
