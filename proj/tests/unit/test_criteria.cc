#include <doctest.h>

#include "oracles.hh"

#include <lllmt/criteria.hh>
#include <lllmt/errors.hh>
#include <lllmt/serialization.hh>

#include <cmath>
#include <numbers>

using namespace lllmt;

namespace {

auto two_events() -> Instance
{
    return Instance(VariableSpace::uniform(3, 2), {BadEvent{{0, 0}, {1, 0}}, BadEvent{{1, 1}, {2, 0}}});
}

auto complementary() -> Instance
{
    return Instance(VariableSpace::uniform(1, 2), {BadEvent{{0, 0}}, BadEvent{{0, 1}}});
}

auto mu_for(const Instance & inst, std::uint64_t seed) -> MuVector
{
    Stream rng(seed, Purpose::generator, 0x3u);
    MuVector mu(inst.event_count());
    for (auto & x : mu)
        x = 2 * rng.uniform();
    return mu;
}

auto close(double a, double b) -> bool { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}

TEST_CASE("orderable sets of small examples")
{
    // A target with no neighbours has only the empty set and itself.
    Instance lone(VariableSpace::uniform(2, 2), {BadEvent{{0, 0}, {1, 1}}});
    CHECK(orderable_sets(lone, 0) == std::vector<std::vector<EventId>>{{}, {0}});

    auto inst = two_events();
    CHECK(orderable_sets(inst, 0) == std::vector<std::vector<EventId>>{{}, {0}, {1}});
    CHECK(assignable_sets(inst, 0) == std::vector<std::vector<EventId>>{{}, {0}, {1}});
    CHECK(is_orderable(inst, inst.event(0), 0, std::vector<EventId>{1}));
    CHECK_FALSE(is_orderable(inst, inst.event(0), 0, std::vector<EventId>{0, 1}));
    CHECK_FALSE(is_orderable(inst, inst.event(0), std::nullopt, std::vector<EventId>{0}));

    // An external target: x0 = 1 is disagreed with by B0 only.
    CHECK(orderable_sets(inst, BadEvent{{0, 1}}) == std::vector<std::vector<EventId>>{{}, {0}});
}

TEST_CASE("orderability depends on the order of coverage")
{
    // Target {x0=0, x1=0}. B1 disagrees on x0 only, B2 on x0 and x1: the order
    // (B1, B2) works, (B2, B1) does not, so the set is orderable.
    Instance inst(VariableSpace::uniform(2, 2), {BadEvent{{0, 0}, {1, 0}}, BadEvent{{0, 1}}, BadEvent{{0, 1}, {1, 1}}});
    CHECK(is_orderable(inst, inst.event(0), 0, std::vector<EventId>{1, 2}));
    CHECK(is_assignable(inst, inst.event(0), 0, std::vector<EventId>{1, 2}));
    std::vector<std::vector<std::uint32_t>> positions{{0, 1}, {0}};
    CHECK(orderable_positions(positions, 2));
    std::vector<std::vector<std::uint32_t>> stuck{{0}, {0}};
    CHECK_FALSE(orderable_positions(stuck, 2));
}

TEST_CASE("enumerators match the brute-force definitions")
{
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        auto inst = oracle::random_instance(seed, 6, 8);
        for (EventId id = 0; id < inst.event_count(); ++id) {
            auto ord = orderable_sets(inst, id);
            auto asg = assignable_sets(inst, id);
            REQUIRE(ord == oracle::family(inst, id, oracle::Family::orderable));
            REQUIRE(asg == oracle::family(inst, id, oracle::Family::assignable));
            CHECK(independent_neighbor_sets(inst, id, NeighborRelation::lopsidependency)
                == oracle::family(inst, id, oracle::Family::independent_lopsided));
            CHECK(independent_neighbor_sets(inst, id, NeighborRelation::dependency)
                == oracle::family(inst, id, oracle::Family::independent_dependency));
            // Orderable sets are assignable.
            for (auto & y : ord)
                CHECK(std::binary_search(asg.begin(), asg.end(), y));
        }
    }
}

TEST_CASE("right-hand sides of every kind match the oracle")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = oracle::random_instance(seed * 7 + 1, 6, 7);
        auto mu = mu_for(inst, seed);
        for (auto kind : all_criterion_kinds())
            for (auto relation : {NeighborRelation::lopsidependency, NeighborRelation::dependency})
                for (double eps : {0.0, 0.3}) {
                    Criterion c{kind, eps, relation, default_enumeration_cap};
                    CriterionEvaluator ev(inst, c);
                    for (EventId id = 0; id < inst.event_count(); ++id) {
                        auto want = oracle::rhs(inst, id, mu, c);
                        CHECK(close(ev.rhs(id, mu), want));
                        CHECK(close(rhs(inst, id, mu, c), want));
                    }
                }
    }
}

TEST_CASE("pointwise ordering of the criteria")
{
    auto at = [](const Instance & inst, EventId id, const MuVector & mu, CriterionKind k) {
        return rhs(inst, id, mu, Criterion{k, 0.0, NeighborRelation::lopsidependency, default_enumeration_cap});
    };
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        auto inst = oracle::random_instance(seed * 13 + 5, 8, 8);
        auto mu = mu_for(inst, seed);
        for (EventId id = 0; id < inst.event_count(); ++id) {
            auto slack = [](double x) { return x * (1 + 1e-12); };
            double ord = at(inst, id, mu, CriterionKind::orderable_exact);
            double asg = at(inst, id, mu, CriterionKind::assignable_exact);
            double blend = at(inst, id, mu, CriterionKind::blend_closed_form);
            double variable = at(inst, id, mu, CriterionKind::llll_variable);
            double pegden = at(inst, id, mu, CriterionKind::pegden_variable);
            CHECK(ord <= slack(asg));
            CHECK(asg <= slack(blend));
            CHECK(blend <= slack(variable));
            CHECK(blend <= slack(pegden));
        }
    }
}

TEST_CASE("right-hand sides are monotone in mu")
{
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        auto inst = oracle::random_instance(seed * 3 + 2, 6, 7);
        if (inst.event_count() == 0)
            continue;
        auto mu = mu_for(inst, seed);
        auto bumped = mu;
        Stream rng(seed, Purpose::generator, 0x4u);
        bumped[rng.below(bumped.size())] += rng.uniform();
        for (auto kind : all_criterion_kinds()) {
            Criterion c{kind};
            for (EventId id = 0; id < inst.event_count(); ++id)
                CHECK(rhs(inst, id, mu, c) <= rhs(inst, id, bumped, c) * (1 + 1e-12));
        }
    }
}

TEST_CASE("worked examples")
{
    Instance lone(VariableSpace({{0.25, 0.75}}), {BadEvent{{0, 0}}});
    MuVector mu{0.7};
    CHECK(rhs(lone, 0, mu, Criterion{}) == doctest::Approx(0.25 * 1.7));

    auto inst = two_events();
    MuVector half{0.5, 0.5};
    CHECK(rhs(inst, 0, half, Criterion{}) == doctest::Approx(0.5));
    CHECK(rhs(inst, 0, half, Criterion{CriterionKind::blend_closed_form}) == doctest::Approx(0.5));
    auto report = check(inst, half, Criterion{});
    CHECK(report.satisfied);
    CHECK(report.total_weight == doctest::Approx(1.0));
}

TEST_CASE("symmetric criterion")
{
    // p = 1/8, d = 1.
    Instance inst(VariableSpace::uniform(5, 2), {BadEvent{{0, 0}, {1, 0}, {2, 0}}, BadEvent{{2, 1}, {3, 0}, {4, 0}}});
    MuVector mu{0, 0};
    Criterion c{CriterionKind::symmetric_lll};
    CHECK(rhs(inst, 0, mu, c) == doctest::Approx(std::numbers::e / 4));
    auto report = check(inst, mu, c);
    CHECK(report.satisfied);
    CHECK(CriterionEvaluator(inst, c).lhs(0, mu) == 1.0);
}

TEST_CASE("complementary events fail every criterion")
{
    auto inst = complementary();
    for (auto kind : all_criterion_kinds()) {
        Criterion c{kind};
        for (double a = 0; a <= 5; a += 0.25)
            for (double b = 0; b <= 5; b += 0.25) {
                MuVector mu{a, b};
                CHECK_FALSE(check(inst, mu, c).satisfied);
            }
        auto found = find_mu_fixed_point(inst, c);
        CHECK_FALSE(found.found);
        CHECK_FALSE(found.reason.empty());
    }
}

TEST_CASE("empty instance is satisfied vacuously")
{
    Instance empty(VariableSpace::uniform(2, 2), {});
    for (auto kind : all_criterion_kinds()) {
        auto report = check(empty, MuVector{}, Criterion{kind});
        CHECK(report.satisfied);
        CHECK(report.total_weight == 0.0);
        CHECK(find_mu_fixed_point(empty, Criterion{kind}).found);
    }
}

TEST_CASE("fixed point search")
{
    auto two = find_mu_fixed_point(two_events(), Criterion{});
    REQUIRE(two.found);
    CHECK(two.mu[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(two.mu[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(check(two_events(), two.mu, Criterion{}).satisfied);

    Instance lone(VariableSpace({{0.25, 0.75}}), {BadEvent{{0, 0}}});
    auto third = find_mu_fixed_point(lone, Criterion{});
    REQUIRE(third.found);
    CHECK(third.mu[0] == doctest::Approx(1.0 / 3).epsilon(1e-6));

    // Whenever the search succeeds, the result passes the strict check.
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = oracle::random_instance(seed * 17, 10, 6, 3);
        for (auto kind : all_criterion_kinds()) {
            Criterion c{kind, 0.1};
            auto r = find_mu_fixed_point(inst, c);
            if (r.found)
                CHECK(check(inst, r.mu, c).satisfied);
        }
    }
}

TEST_CASE("enumeration cap and input validation")
{
    std::vector<BadEvent> events{BadEvent{{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
    for (VarId i = 0; i < 4; ++i)
        for (int k = 0; k < 3; ++k)
            events.push_back(BadEvent{{i, 1}, {static_cast<VarId>(4 + 3 * i + k), 0}});
    Instance inst(VariableSpace::uniform(16, 2), events);
    CHECK_THROWS_AS((void)orderable_sets(inst, 0, 10), CapacityExceeded);
    CHECK(orderable_sets(inst, 0).size() == 4 * 4 * 4 * 4 + 1);
    CHECK_THROWS_AS(CriterionEvaluator(inst, Criterion{CriterionKind::orderable_exact, 0, NeighborRelation::lopsidependency, 10}),
        CapacityExceeded);

    CHECK_THROWS_AS(validate_mu(two_events(), MuVector{0.5}), InputError);
    CHECK_THROWS_AS(validate_mu(two_events(), MuVector{0.5, -1}), InputError);
    CHECK_THROWS_AS(validate_mu(two_events(), MuVector{0.5, NAN}), InputError);
    CHECK(parse_criterion_kind("blend-closed-form") == CriterionKind::blend_closed_form);
    CHECK(parse_criterion_kind("orderable_exact") == CriterionKind::orderable_exact);
    CHECK_THROWS_AS((void)parse_criterion_kind("shearer"), InputError);
    for (auto kind : all_criterion_kinds())
        CHECK(parse_criterion_kind(to_string(kind)) == kind);
}

TEST_CASE("reports serialize to JSON")
{
    auto report = check(two_events(), MuVector{0.5, 0.5}, Criterion{});
    auto j = to_json(report);
    CHECK(j["satisfied"] == true);
    CHECK(j["events"].size() == 2);
    CHECK(j["W"].get<double>() == doctest::Approx(1.0));
    auto back = report_from_json(j);
    CHECK(back.satisfied == report.satisfied);
    CHECK(back.events[1].rhs == report.events[1].rhs);
    CHECK(back.criterion.kind == CriterionKind::orderable_exact);
}
