#include <doctest.h>

#include "oracles.hh"

#include <lllmt/criteria.hh>
#include <lllmt/errors.hh>
#include <lllmt/sequential.hh>
#include <lllmt/serialization.hh>

#include <cmath>
#include <sstream>

using namespace lllmt;

namespace {

auto fair_lone() -> Instance { return Instance(VariableSpace::uniform(1, 2), {BadEvent{{0, 0}}}); }

}

TEST_CASE("true-event set")
{
    TrueEventSet s(130);
    for (EventId e : {129u, 3u, 64u, 5u})
        s.insert(e);
    s.insert(3);
    CHECK(s.size() == 4);
    CHECK(s.lowest() == EventId{3});
    CHECK(s.nth(2) == 64);
    CHECK(s.to_vector() == std::vector<EventId>{3, 5, 64, 129});
    s.erase(3);
    s.erase(3);
    CHECK(s.size() == 3);
    CHECK(s.lowest() == EventId{5});
    CHECK(TrueEventSet(10).lowest() == std::nullopt);
}

TEST_CASE("truth tracker follows single-variable updates")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto inst = oracle::random_instance(seed, 8, 12);
        auto a = draw_initial(inst.space(), seed);
        TruthTracker tracker(inst, a);
        Stream rng(seed, Purpose::generator, 0x5u);
        for (int k = 0; k < 200; ++k) {
            auto i = static_cast<VarId>(rng.below(inst.variable_count()));
            auto j = static_cast<Value>(rng.below(inst.space().domain_size(i)));
            tracker.set(i, j);
            a[i] = j;
            REQUIRE(tracker.true_events().to_vector() == true_events(inst, a));
        }
    }
}

TEST_CASE("no events terminates immediately")
{
    Instance empty(VariableSpace::uniform(3, 2), {});
    auto r = run(empty, 5);
    CHECK(r.stats.terminated);
    CHECK(r.stats.steps == 0);
    CHECK(r.assignment == draw_initial(empty.space(), 5));
}

TEST_CASE("lone event is a geometric process")
{
    auto inst = fair_lone();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto r = run(inst, seed);
        REQUIRE(r.stats.terminated);
        CHECK(r.assignment[0] == 1);
        // Count the zero draws directly from the streams.
        std::size_t zeros = 0;
        auto x = Stream(seed, Purpose::initial, 0).categorical(inst.space().probs(0));
        while (x == 0) {
            ++zeros;
            x = Stream(seed, Purpose::resample, zeros, 0).categorical(inst.space().probs(0));
        }
        CHECK(r.stats.steps == zeros);
    }
}

TEST_CASE("complementary events never terminate")
{
    Instance inst(VariableSpace::uniform(1, 2), {BadEvent{{0, 0}}, BadEvent{{0, 1}}});
    auto r = run(inst, 1, RunOptions{500, true});
    CHECK_FALSE(r.stats.terminated);
    CHECK(r.stats.steps == 500);
    CHECK(r.log.size() == 500);
    CHECK(check_log(inst, r.log) == std::nullopt);
}

TEST_CASE("runs are reproducible and logs replay")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto inst = oracle::random_instance(seed, 10, 8);
        for (auto rule : {lowest_id_rule(), random_rule()}) {
            RunOptions options{20'000, true};
            auto a = run(inst, seed, options, rule);
            auto b = run(inst, seed, options, rule);
            CHECK(a.assignment == b.assignment);
            CHECK(a.log.steps.size() == b.log.steps.size());
            CHECK(a.log.replay() == a.assignment);
            CHECK(true_events(inst, a.assignment).empty() == a.stats.terminated);
            CHECK(check_log(inst, a.log) == std::nullopt);
            std::size_t total = 0;
            for (auto c : a.stats.resample_counts)
                total += c;
            CHECK(total == a.stats.steps);
            for (std::size_t t = 1; t <= a.log.size(); ++t) {
                auto before = a.log.state_before(t);
                CHECK(is_true(inst.event(a.log.steps[t - 1].event), before));
            }
        }
    }
}

TEST_CASE("log checks catch tampering")
{
    Instance inst(VariableSpace::uniform(3, 2), {BadEvent{{0, 0}, {1, 0}}, BadEvent{{1, 1}, {2, 0}}});
    std::uint64_t seed = 1;
    RunResult r;
    while ((r = run(inst, seed)).log.size() < 2)
        ++seed;
    auto bad = r.log;
    bad.steps[0].event = 1 - bad.steps[0].event;
    CHECK(check_log(inst, bad).has_value());
    bad = r.log;
    bad.steps[1].t = 7;
    CHECK(check_log(inst, bad).has_value());
    bad = r.log;
    bad.steps[0].values[0].value = 5;
    CHECK(check_log(inst, bad).has_value());

    std::stringstream buf;
    write_log_jsonl(buf, r.log);
    auto back = read_log_jsonl(buf);
    CHECK(back.initial == r.log.initial);
    REQUIRE(back.steps.size() == r.log.steps.size());
    CHECK(back.steps.back().values == r.log.steps.back().values);

    std::istringstream broken("{\"initial\": [0, 0, 0]}\n{\"t\": 1, \"event\": 0}\nnot json\n");
    try {
        (void)read_log_jsonl(broken);
        FAIL("expected an error");
    }
    catch (const InputError & e) {
        CHECK(e.line() >= 2);
    }
}

TEST_CASE("rules that pick false events are rejected")
{
    // Some event is always true here, so the rule is always consulted.
    Instance inst(VariableSpace::uniform(1, 2), {BadEvent{{0, 0}}, BadEvent{{0, 1}}});
    ResampleRule silly = [](const RuleContext & ctx) -> EventId { return ctx.true_events.lowest().value() == 0 ? 1 : 0; };
    CHECK_THROWS_AS((void)run(inst, 3, {}, silly), ContractViolation);
    ResampleRule unknown = [](const RuleContext &) -> EventId { return 99; };
    CHECK_THROWS_AS((void)run(inst, 3, {}, unknown), ContractViolation);
}

TEST_CASE("batches are deterministic and respect the weights")
{
    Instance inst(VariableSpace::uniform(3, 2), {BadEvent{{0, 0}, {1, 0}}, BadEvent{{1, 1}, {2, 0}}});
    auto a = run_batch(inst, 9, 4000);
    auto b = run_batch(inst, 9, 4000);
    CHECK(a.mean_resamples == b.mean_resamples);
    CHECK(a.terminated == 4000);
    auto mu = find_mu_fixed_point(inst, Criterion{});
    REQUIRE(mu.found);
    for (EventId e = 0; e < 2; ++e)
        CHECK(a.mean_resamples[e] <= mu.mu[e] + 3 * a.sd_resamples[e] / std::sqrt(4000.0));
}

TEST_CASE("terminal distribution of an atomic event")
{
    auto inst = fair_lone();
    auto est = estimate_event_probability(inst, MuVector{1.0}, BadEvent{{0, 1}}, 500, 3);
    CHECK(est.bound == doctest::Approx(1.0));
    CHECK(est.frequency == 1.0);
    CHECK(est.hits == 500);

    Instance wider(VariableSpace::uniform(3, 2), {BadEvent{{0, 0}}});
    auto off = estimate_event_probability(wider, MuVector{1.0}, BadEvent{{1, 0}, {2, 1}}, 4000, 3);
    CHECK(off.bound == doctest::Approx(0.25));
    CHECK(std::abs(off.frequency - 0.25) <= 3 * std::sqrt(0.25 * 0.75 / 4000));

    CHECK_THROWS_AS((void)estimate_event_probability(inst, MuVector{1.0}, BadEvent{{0, 0}}, 10, 3), InputError);
}
