#include <doctest.h>

#include "oracles.hh"

#include <lllmt/errors.hh>
#include <lllmt/instance_io.hh>
#include <lllmt/model.hh>
#include <lllmt/random.hh>
#include <lllmt/ramsey.hh>

#include <cmath>
#include <sstream>

using namespace lllmt;

namespace {

auto fair_bits(std::size_t n) { return VariableSpace::uniform(n, 2); }

// Calls f on every assignment of the space, with its product probability.
template <typename F>
void for_each_assignment(const VariableSpace & space, F && f)
{
    Assignment a(space.size(), 0);
    while (true) {
        double p = 1;
        for (VarId i = 0; i < space.size(); ++i)
            p *= space.prob(i, a[i]);
        f(a, p);
        std::size_t i = 0;
        while (i < a.size() && ++a[i] == space.domain_size(static_cast<VarId>(i)))
            a[i++] = 0;
        if (i == a.size())
            return;
    }
}

}

TEST_CASE("is_true is a conjunction")
{
    Assignment a{1, 0, 1};
    CHECK(is_true(BadEvent{{1, 0}}, a));
    CHECK_FALSE(is_true(BadEvent{{1, 0}, {2, 0}}, a));
    CHECK_THROWS_AS((void)is_true(BadEvent{{3, 0}}, a), std::out_of_range);
}

TEST_CASE("lopsidependency examples")
{
    CHECK(lopsidependent(BadEvent{{0, 0}}, BadEvent{{0, 1}}));
    CHECK_FALSE(lopsidependent(BadEvent{{0, 0}, {1, 1}}, BadEvent{{0, 0}}));
    CHECK_FALSE(lopsidependent(BadEvent{{0, 0}}, BadEvent{{1, 0}}));
    CHECK(share_variable(BadEvent{{0, 0}, {1, 1}}, BadEvent{{0, 0}}));
    BadEvent b{{0, 0}, {2, 1}};
    CHECK_FALSE(lopsidependent(b, b));
}

TEST_CASE("event probabilities")
{
    CHECK(event_prob(BadEvent{{0, 0}, {1, 1}}, fair_bits(2)) == doctest::Approx(0.25).epsilon(1e-15));
    VariableSpace certain({{1.0, 0.0}});
    CHECK(event_prob(BadEvent{{0, 0}}, certain) == 1.0);

    // A triangle of red edges: q = p^3.
    auto [instance, config] = ramsey_build(6, 3);
    CHECK(instance.prob(0) == doctest::Approx(std::pow(config.p, 3)).epsilon(1e-14));
}

TEST_CASE("validation rejects malformed instances")
{
    auto report = validate(fair_bits(2), std::vector<BadEvent>{BadEvent{{0, 0}, {0, 1}}});
    REQUIRE_FALSE(report.ok());
    CHECK(report.issues[0].event == EventId{0});
    CHECK(report.summary().find("contradictory") != std::string::npos);

    CHECK_FALSE(validate(VariableSpace({{0.5, 0.6}}), {}).ok());
    CHECK_FALSE(validate(fair_bits(1), std::vector<BadEvent>{BadEvent{}}).ok());
    CHECK_FALSE(validate(fair_bits(1), std::vector<BadEvent>{BadEvent{{0, 2}}}).ok());
    CHECK_FALSE(validate(fair_bits(1), std::vector<BadEvent>{BadEvent{{1, 0}}}).ok());
    CHECK_FALSE(validate(VariableSpace(std::vector<std::vector<double>>{{}}), {}).ok());
    CHECK_FALSE(validate(VariableSpace({{-0.5, 1.5}}), {}).ok());

    CHECK_THROWS_AS(Instance(fair_bits(1), {BadEvent{{0, 0}, {0, 1}}}), InvalidInstance);
    Instance ok(fair_bits(3), {BadEvent{{0, 0}, {1, 0}}, BadEvent{{1, 1}, {2, 0}}});
    CHECK(validate(ok).ok());
}

TEST_CASE("precomputed relations agree with the definitions")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = oracle::random_instance(seed, 8, 10);
        auto m = inst.event_count();
        REQUIRE(validate(inst).ok());
        for (EventId a = 0; a < m; ++a) {
            std::vector<EventId> lops, deps;
            for (EventId b = 0; b < m; ++b) {
                if (a == b)
                    continue;
                CHECK(inst.lopsidependent(a, b) == lopsidependent(inst.event(b), inst.event(a)));
                if (lopsidependent(inst.event(a), inst.event(b)))
                    lops.push_back(b);
                if (share_variable(inst.event(a), inst.event(b)))
                    deps.push_back(b);
            }
            CHECK(std::vector<EventId>(inst.neighbors(a).begin(), inst.neighbors(a).end()) == lops);
            CHECK(std::vector<EventId>(inst.dependency_neighbors(a).begin(), inst.dependency_neighbors(a).end()) == deps);
        }
        for (VarId i = 0; i < inst.variable_count(); ++i)
            for (Value j = 0; j < inst.space().domain_size(i); ++j) {
                for (auto e : inst.holders(i, j))
                    CHECK(inst.event(e).demand(i) == j);
                for (auto e : inst.disagreeing(i, j))
                    CHECK(oracle::term_disagrees({i, j}, inst.event(e)));
                std::size_t holders = 0, disagree = 0;
                for (EventId e = 0; e < m; ++e) {
                    holders += inst.event(e).demand(i) == j;
                    disagree += oracle::term_disagrees({i, j}, inst.event(e));
                }
                CHECK(inst.holders(i, j).size() == holders);
                CHECK(inst.disagreeing(i, j).size() == disagree);
            }
    }
}

TEST_CASE("lopsidependent events are mutually exclusive and probabilities match brute force")
{
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto inst = oracle::random_instance(seed * 31, 10, 8);
        auto m = inst.event_count();
        std::vector<double> measure(m, 0.0);
        for_each_assignment(inst.space(), [&](const Assignment & a, double p) {
            for (EventId e = 0; e < m; ++e) {
                bool t = is_true(inst.event(e), a);
                if (t)
                    measure[e] += p;
                for (auto f : inst.neighbors(e))
                    CHECK_FALSE((t && is_true(inst.event(f), a)));
            }
        });
        for (EventId e = 0; e < m; ++e)
            CHECK(std::abs(measure[e] - inst.prob(e)) <= 1e-12);
    }
}

TEST_CASE("instance text format round-trips")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto inst = oracle::random_instance(seed);
        std::stringstream buf;
        write_instance(buf, inst);
        auto back = read_instance(buf);
        REQUIRE(back.event_count() == inst.event_count());
        REQUIRE(back.variable_count() == inst.variable_count());
        for (EventId e = 0; e < inst.event_count(); ++e)
            CHECK(back.event(e) == inst.event(e));
        for (VarId i = 0; i < inst.variable_count(); ++i)
            for (Value j = 0; j < inst.space().domain_size(i); ++j)
                CHECK(back.space().prob(i, j) == inst.space().prob(i, j));
    }
}

TEST_CASE("instance parser reports line numbers")
{
    auto line_of = [](const std::string & text) -> std::size_t {
        std::istringstream in(text);
        try {
            (void)read_instance(in);
        }
        catch (const InputError & e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("vars 1\ndom 0 0:0.5 1:0.5\nev (0,0) (1\n") == 3);
    CHECK(line_of("dom 0 0:1\n") == 1);
    CHECK(line_of("vars 1\ndom 0 0:0.5 0:0.5\n") == 2);
    CHECK(line_of("vars 2\ndom 0 0:1\nev (0,0)\n") == 3);
    CHECK(line_of("vars 1\n# comment\ndom 0 0:1\nbogus\n") == 4);

    std::istringstream spaced("vars 2 # two\ndom 0 0:0.5 1:0.5\ndom 1 0:1\nev ( 0 , 1 ) (1,0)\n");
    auto inst = read_instance(spaced);
    CHECK(inst.event(0) == BadEvent{{0, 1}, {1, 0}});

    std::istringstream unnormalized("vars 1\ndom 0 0:0.5 1:0.6\n");
    CHECK_THROWS_AS((void)read_instance(unnormalized), InvalidInstance);
    CHECK(parse_event("(2,1) (0,0)") == BadEvent{{0, 0}, {2, 1}});
    CHECK_THROWS_AS((void)parse_event(""), InputError);
}

TEST_CASE("fixture files load")
{
    auto inst = read_instance_file(LLLMT_TEST_DATA "/two_events.inst");
    CHECK(inst.event_count() == 2);
    CHECK(inst.lopsidependent(0, 1));
    CHECK_THROWS_AS((void)read_instance_file(LLLMT_TEST_DATA "/malformed.inst"), InputError);
    CHECK_THROWS_AS((void)read_instance_file(LLLMT_TEST_DATA "/missing.inst"), InputError);
}

TEST_CASE("keyed streams are reproducible and independent of draw order")
{
    Stream a(7, Purpose::resample, 3, 4), b(7, Purpose::resample, 3, 4), c(7, Purpose::resample, 4, 3);
    auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
    CHECK(Stream(7, Purpose::initial, 1).next() != Stream(7, Purpose::resample, 1).next());

    Stream s(1, Purpose::generator);
    std::vector<double> probs{0.0, 0.3, 0.0, 0.7};
    std::size_t ones = 0;
    for (int k = 0; k < 20000; ++k) {
        auto v = s.categorical(probs);
        REQUIRE((v == 1 || v == 3));
        ones += v == 1;
    }
    CHECK(std::abs(static_cast<double>(ones) / 20000 - 0.3) < 0.02);
    for (int k = 0; k < 1000; ++k) {
        auto u = s.uniform();
        REQUIRE((u >= 0.0 && u < 1.0));
        REQUIRE(s.below(5) < 5);
    }
    CHECK(batch_seed(1, 0) != batch_seed(1, 1));
}
