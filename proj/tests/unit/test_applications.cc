#include <doctest.h>

#include "oracles.hh"

#include <lllmt/criteria.hh>
#include <lllmt/errors.hh>
#include <lllmt/graph_io.hh>
#include <lllmt/hamiltonian.hh>
#include <lllmt/hypergraph_coloring.hh>
#include <lllmt/ramsey.hh>
#include <lllmt/sat.hh>
#include <lllmt/sequential.hh>
#include <lllmt/transversal.hh>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace lllmt;

namespace {

// Every s-subset of {0..n-1} in lexicographic order.
auto subsets(std::size_t n, std::size_t s) -> std::vector<std::vector<std::uint32_t>>
{
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto & self, std::uint32_t from) -> void {
        if (cur.size() == s) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = from; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Target edge {0..k-1}; each of its vertices lies in L-1 further edges that
// share nothing else. This is the neighbourhood the colouring bound assumes.
auto star_of_edges(std::size_t k, std::size_t L) -> std::pair<std::size_t, std::vector<std::vector<std::uint32_t>>>
{
    std::vector<std::vector<std::uint32_t>> edges(1);
    for (std::uint32_t v = 0; v < k; ++v)
        edges[0].push_back(v);
    auto next = static_cast<std::uint32_t>(k);
    for (std::uint32_t v = 0; v < k; ++v)
        for (std::size_t r = 1; r < L; ++r) {
            std::vector<std::uint32_t> e{v};
            for (std::size_t j = 1; j < k; ++j)
                e.push_back(next++);
            edges.push_back(e);
        }
    return {next, edges};
}

auto close(double a, double b, double tol = 1e-12) -> bool { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}

TEST_CASE("k-SAT bounds")
{
    auto b6 = ksat_bounds(6);
    CHECK(b6.l_new == doctest::Approx(8.240).epsilon(1e-4));
    CHECK(std::floor(b6.l_new) == 8);
    CHECK(b6.l_gst == doctest::Approx(128 / (7 * std::numbers::e)));
    CHECK(b6.l_gst == doctest::Approx(6.727).epsilon(1e-4));
    for (std::size_t k = 3; k <= 20; ++k) {
        auto b = ksat_bounds(k);
        double kk = static_cast<double>(k);
        CHECK(close(b.l_new, std::pow(2.0, kk + 1) * std::pow(1 - 1 / kk, kk) / (kk - 1) - 2 / kk));
        CHECK(b.l_new > b.l_gst);
    }
    for (std::size_t k = 3; k <= 12; ++k) {
        auto L = std::floor(ksat_bounds(k).l_new);
        auto alpha = ksat_alpha(k, L);
        auto x = ksat_x(k, L, alpha);
        CHECK(alpha > 0);
        CHECK((x >= 0 && x <= 1));
        CHECK(ksat_balanced_slack(k, L, alpha) >= 0);
    }
    CHECK(ksat_true_probability(0.3, 1.0) == doctest::Approx(0.5 - 0.15));
    CHECK(ksat_true_probability(0.3, 0.5) == 0.5);
    CHECK(ksat_true_probability(0.9, 0.5) == 0.5);
}

TEST_CASE("k-SAT instances encode falsified clauses")
{
    Cnf cnf{4, {{1, -2, 3}, {-1, 2, -4}, {2, 3, 4}}};
    auto build = ksat_build(cnf);
    auto & inst = build.instance;
    REQUIRE(inst.event_count() == 3);
    CHECK(build.config.k == 3);
    CHECK(build.config.occurrences == std::vector<std::size_t>{2, 3, 2, 2});
    CHECK(build.config.delta[1] == doctest::Approx(2.0 / 3));
    for (VarId i = 0; i < 4; ++i)
        CHECK(inst.space().prob(i, 1) == doctest::Approx(ksat_true_probability(build.config.x, build.config.delta[i])));
    Assignment a(4, 0);
    for (unsigned mask = 0; mask < 16; ++mask) {
        for (VarId i = 0; i < 4; ++i)
            a[i] = mask >> i & 1;
        bool any_true = false;
        for (EventId c = 0; c < 3; ++c) {
            Cnf one{4, {cnf.clauses[c]}};
            CHECK(is_true(inst.event(c), a) == ! satisfies(one, a));
            any_true = any_true || is_true(inst.event(c), a);
        }
        CHECK(satisfies(cnf, a) == ! any_true);
    }
    CHECK(build.mu == MuVector(3, build.config.alpha));

    CHECK_THROWS_AS((void)ksat_build(Cnf{3, {{1, -1, 2}}}), InputError);
    CHECK_THROWS_AS((void)ksat_build(Cnf{3, {{1, 2}, {1, 2, 3}}}), InputError);
    CHECK_THROWS_AS((void)ksat_build(Cnf{3, {{1}}}), InputError);
}

TEST_CASE("balanced generator and the per-clause criterion")
{
    auto cnf = random_balanced_ksat(200, 6, 8, 1);
    CHECK(cnf.clauses.size() == 266);
    auto build = ksat_build(cnf);
    CHECK(build.config.L == 8);
    CHECK(ksat_clause_check(build).satisfied);
    auto r = run(build.instance, 3);
    REQUIRE(r.stats.terminated);
    CHECK(satisfies(cnf, r.assignment));

    // Unbalanced signs: the biased measure must still pass clause by clause.
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto k = 3 + seed % 4;
        auto L = static_cast<std::size_t>(std::floor(ksat_bounds(k).l_new));
        auto mixed = random_balanced_ksat(60, k, L, seed);
        Stream rng(seed, Purpose::generator, 0x5a7u);
        for (auto & clause : mixed.clauses)
            for (auto & lit : clause)
                if (rng.uniform() < 0.3 + 0.02 * static_cast<double>(seed))
                    lit = std::abs(lit);
        auto b = ksat_build(mixed);
        CHECK(b.config.L <= L);
        CHECK(ksat_clause_check(b).satisfied);
    }

    // Above the bound the build still happens, with a warning.
    auto over = ksat_build(random_balanced_ksat(100, 3, 12, 2));
    CHECK_FALSE(over.config.warnings.empty());
}

TEST_CASE("DIMACS reader")
{
    auto cnf = read_dimacs_file(LLLMT_TEST_DATA "/small.cnf");
    CHECK(cnf.variables == 3);
    CHECK(cnf.clauses == std::vector<std::vector<int>>{{1, -2}, {2, 3}});
    std::istringstream spanning("c hi\np cnf 3 2\n1 2\n 3 0 -1\n-2 -3 0\n%\n0\n");
    CHECK(read_dimacs(spanning).clauses.size() == 2);
    std::stringstream buf;
    write_dimacs(buf, cnf);
    CHECK(read_dimacs(buf).clauses == cnf.clauses);

    auto line_of = [](const std::string & text) -> std::size_t {
        std::istringstream in(text);
        try {
            (void)read_dimacs(in);
        }
        catch (const InputError & e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("p cnf 2 1\n1 3 0\n") == 2);
    CHECK(line_of("p cnf 2 1\n1 x 0\n") == 2);
    CHECK(line_of("1 2 0\n") == 1);
    std::istringstream short_count("p cnf 2 2\n1 2 0\n");
    CHECK_THROWS_AS((void)read_dimacs(short_count), InputError);
}

TEST_CASE("hypergraph colouring table")
{
    std::vector<std::size_t> improved{2, 3, 5, 8, 13, 23, 40, 72}, original{2, 3, 4, 7, 12, 21, 38, 69};
    auto table = hypergraph_table(2, 4, 11);
    REQUIRE(table.size() == 8);
    for (std::size_t r = 0; r < 8; ++r) {
        CHECK(table[r].k == 4 + r);
        CHECK(table[r].l_improved == improved[r]);
        CHECK(table[r].l_original == original[r]);
        CHECK(table[r].l_improved >= table[r].l_original);
    }
    CHECK(hypergraph_lmax(2, 6, HypergraphCriterion::improved) == 5);
    CHECK(hypergraph_lmax(2, 6, HypergraphCriterion::original) == 4);
    CHECK(hypergraph_lmax(2, 10, HypergraphCriterion::improved) == 40);
    CHECK(hypergraph_lmax(2, 10, HypergraphCriterion::original) == 38);
}

TEST_CASE("hypergraph maxima are sharp on a fine weight grid")
{
    // The weight found at lmax passes; an independent grid finds none at lmax + 1.
    for (std::size_t k = 4; k <= 9; ++k)
        for (auto kind : {HypergraphCriterion::improved, HypergraphCriterion::original}) {
            auto L = hypergraph_lmax(2, k, kind);
            auto alpha = hypergraph_alpha(kind, 2, k, static_cast<double>(L));
            REQUIRE(alpha);
            CHECK(*alpha >= hypergraph_rhs(kind, 2, k, static_cast<double>(L), *alpha));
            bool next = false;
            for (double a = 1e-9; a < 10; a *= 1.0005)
                next = next || a >= hypergraph_rhs(kind, 2, k, static_cast<double>(L + 1), a);
            CHECK_FALSE(next);
        }
}

TEST_CASE("colouring bounds match the criteria on the worst-case neighbourhood")
{
    for (auto [c, k, L] : {std::tuple{2, 2, 3}, std::tuple{3, 3, 2}, std::tuple{2, 3, 3}, std::tuple{3, 2, 3}}) {
        auto [n, edges] = star_of_edges(k, L);
        auto build = hypergraph_build(n, edges, c);
        for (double alpha : {0.01, 0.1, 0.4}) {
            MuVector mu(build.instance.event_count(), alpha);
            auto ord = rhs(build.instance, 0, mu, Criterion{CriterionKind::orderable_exact});
            CHECK(close(ord, hypergraph_improved_rhs(c, k, static_cast<double>(L), alpha)));
            auto lll = rhs(build.instance, 0, mu, Criterion{CriterionKind::llll});
            CHECK(close(lll, hypergraph_original_rhs(c, k, static_cast<double>(L), alpha)));
        }
    }
}

TEST_CASE("asymptotic colouring bound")
{
    for (std::size_t c : {2, 3})
        for (std::size_t k = 5; k <= 14; ++k) {
            double L = std::floor(hypergraph_closed_form_l(c, k));
            if (L < 1)
                continue;
            auto alpha = hypergraph_asymptotic_alpha(c, k, L);
            CHECK(alpha >= hypergraph_asymptotic_rhs(c, k, L, alpha) * (1 - 1e-12));
        }
    double ck = std::pow(2.0, 10) * std::pow(0.9, 9) / 10;
    CHECK(hypergraph_closed_form_l(2, 10) == doctest::Approx(ck));
}

TEST_CASE("hypergraph colouring instances")
{
    auto one = hypergraph_build(2, {{0, 1}}, 2);
    REQUIRE(one.instance.event_count() == 2);
    CHECK(one.instance.prob(0) == doctest::Approx(0.25));
    CHECK(one.instance.prob(1) == doctest::Approx(0.25));
    CHECK(one.instance.lopsidependent(0, 1));
    auto two = hypergraph_build(4, {{0, 1}, {2, 3}}, 2);
    CHECK_FALSE(two.instance.lopsidependent(0, 2));
    CHECK_FALSE(two.instance.lopsidependent(0, 3));
    CHECK_THROWS_AS((void)hypergraph_build(3, {{0, 1}, {0, 1, 2}}, 2), InputError);
    CHECK_THROWS_AS((void)hypergraph_build(3, {{0, 1}}, 1), InputError);

    auto g = random_uniform_hypergraph(60, 6, 50, 5, 4);
    auto build = hypergraph_build(g.vertex_count, g.edges, 2);
    CHECK(build.L <= 5);
    REQUIRE(build.alpha);
    CHECK(check(build.instance, build.mu, Criterion{CriterionKind::orderable_exact}).satisfied);
    auto r = run(build.instance, 4);
    REQUIRE(r.stats.terminated);
    CHECK(is_proper_coloring(g.edges, r.assignment));
}

TEST_CASE("transversal criterion")
{
    CHECK(transversal_threshold(2) == 7);
    for (std::size_t delta = 1; delta <= 6; ++delta)
        for (std::size_t b = 2; b <= 30; ++b) {
            CHECK(transversal_feasible(b, delta) == (b >= 4 * delta - 1));
            // Independent grid scan, away from the tangent case where only one alpha works.
            if (b != 4 * delta - 1) {
                bool grid = false;
                for (double a = 1e-6; a < 10 && ! grid; a *= 1.001)
                    grid = a >= transversal_rhs(b, delta, a);
                CHECK(grid == transversal_feasible(b, delta));
            }
            auto alpha = transversal_alpha(b, delta);
            CHECK(alpha.has_value() == transversal_feasible(b, delta));
            if (alpha)
                CHECK(transversal_check(b, delta, *alpha));
        }
    auto a = transversal_alpha(7, 2);
    REQUIRE(a);
    CHECK(*a == doctest::Approx(1.0 / 12));
    double bb = 49;
    CHECK(transversal_rhs(7, 2, 1.0 / 12) == doctest::Approx((1.0 / 12 + std::pow(1 + 12.0 / 12, 2)) / bb));
    auto fp = transversal_fixed_point(9, 2);
    REQUIRE(fp);
    CHECK(*fp == doctest::Approx(*transversal_alpha(9, 2)).epsilon(1e-8));
    CHECK_FALSE(transversal_fixed_point(6, 2));
    // Tangent case: double root at 1/12.
    auto tangent = transversal_fixed_point(7, 2);
    REQUIRE(tangent);
    CHECK(*tangent == doctest::Approx(1.0 / 12).epsilon(1e-6));
    CHECK(transversal_check(7, 2, *tangent));
}

TEST_CASE("transversal instances")
{
    // Class {0, 1} carries an intra-class edge that is dropped.
    auto g = make_graph(4, {{0, 1}, {0, 2}, {1, 3}});
    auto build = transversal_build(g, {{0, 1}, {2, 3}});
    CHECK(build.dropped_edges == 1);
    CHECK(build.instance.event_count() == 2);
    CHECK(build.instance.prob(0) == doctest::Approx(0.25));
    CHECK(build.b == 2);
    CHECK_THROWS_AS((void)transversal_build(g, {{0, 1, 2}, {3}}), InputError);
    CHECK_THROWS_AS((void)transversal_build(g, {{0, 1}, {1, 3}}), InputError);
    CHECK_THROWS_AS((void)transversal_build(g, {{0, 1}}), InputError);

    auto [big, classes] = random_partitioned_graph(20, 7, 2, 5);
    CHECK(big.max_degree() <= 2);
    auto tb = transversal_build(big, classes);
    REQUIRE(tb.alpha);
    CHECK(tb.alpha == doctest::Approx(1.0 / 12));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto r = run(tb.instance, seed);
        REQUIRE(r.stats.terminated);
        auto picked = chosen_vertices(classes, r.assignment);
        CHECK(picked.size() == 20);
        CHECK(is_independent(big, picked));
    }
}

TEST_CASE("hamiltonian two-weight system")
{
    auto at = [](std::size_t k, double p, std::size_t nb) { return hamiltonian_weights_at(k, p, nb); };
    auto found = hamiltonian_search(43);
    REQUIRE(found.weights);
    auto w = *found.weights;
    double k = 43;
    CHECK(w.a >= w.p * w.p * (w.a + std::pow(1 + (k - 2) * w.b, 2)));
    CHECK(w.b >= std::pow(1 - w.p, k - 1) * (w.b + std::pow(1 + 2 * w.a, k - 1)));
    CHECK(found.feasible_points > 0);
    CHECK(found.p_low <= w.p);
    CHECK(w.p <= found.p_high);
    CHECK_FALSE(hamiltonian_search(42).weights);
    CHECK_FALSE(hamiltonian_search(20).weights);
    CHECK_FALSE(at(20, 0.3, 18));
    CHECK(hamiltonian_threshold() == std::size_t{43});
}

TEST_CASE("hamiltonian instances")
{
    auto [g, cycle] = circulant_regular(12, 4, 3);
    for (auto d : g.degrees())
        CHECK(d == 4);
    for (std::size_t i = 0; i < cycle.size(); ++i)
        CHECK(g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()]));

    auto [big, hc] = circulant_regular(200, 43, 7);
    auto build = hamiltonian_build(big, hc);
    auto & inst = build.instance;
    REQUIRE(inst.event_count() == 400);
    // A type-A event and a type-B event through the same vertex disagree there.
    CHECK(inst.lopsidependent(0, 200 + hc[0]));
    CHECK(check(inst, build.mu, Criterion{CriterionKind::blend_closed_form}).satisfied);
    auto r = run(inst, 1);
    REQUIRE(r.stats.terminated);
    auto s = selected_vertices(r.assignment);
    std::vector<char> in(200, 0);
    for (auto v : s)
        in[v] = 1;
    for (std::size_t i = 0; i < 200; ++i)
        CHECK_FALSE((in[hc[i]] && in[hc[(i + 1) % 200]]));
    auto adj = big.adjacency();
    for (Vertex v = 0; v < 200; ++v) {
        bool covered = in[v];
        for (auto u : adj[v]) {
            auto pos = std::find(hc.begin(), hc.end(), v) - hc.begin();
            bool on_cycle = u == hc[(pos + 1) % 200] || u == hc[(pos + 199) % 200];
            covered = covered || (! on_cycle && in[u]);
        }
        CHECK(covered);
    }

    auto [odd, oc] = circulant_regular(10, 3);
    CHECK(odd.degrees() == std::vector<std::size_t>(10, 3));
    std::vector<Vertex> broken = oc;
    std::swap(broken[1], broken[5]);
    CHECK_THROWS_AS((void)hamiltonian_build(odd, broken), InputError);
    auto irregular = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
    CHECK_THROWS_AS((void)hamiltonian_build(irregular, {0, 1, 2, 3}), InputError);
}

TEST_CASE("ramsey configuration")
{
    for (std::size_t n : {10, 20, 50}) {
        auto c = ramsey_config(n, 3);
        CHECK(close(c.p, std::sqrt(1.0 / 3) / std::sqrt(static_cast<double>(n))));
        CHECK(close(c.q, std::pow(c.p, 3)));
        CHECK(close(c.mu, c.q / (1 - c.q)));
    }
    auto c4 = ramsey_config(30, 4);
    CHECK(close(c4.p, std::pow(4.0 / 12, 2.0 / 10) * std::pow(30.0, -2.0 / 5)));
    CHECK(binomial(10, 3) == 120);
    CHECK(edge_index(5, 0, 1) == 0);
    CHECK(edge_index(5, 3, 4) == 9);
    CHECK(edge_index(5, 2, 0) == edge_index(5, 0, 2));

    auto [inst, config] = ramsey_build(8, 3);
    CHECK(inst.event_count() == 56);
    for (EventId e = 0; e < inst.event_count(); ++e)
        CHECK(inst.neighbors(e).empty());
    CHECK(inst.prob(0) == doctest::Approx(config.q));
    CHECK_THROWS_AS((void)ramsey_build(8, 2), InputError);
    CHECK_THROWS_AS((void)ramsey_build(3, 4), InputError);
    CHECK_THROWS_AS((void)ramsey_build(400, 5), InputError);

    auto [only, conf] = ramsey_build(6, 3);
    auto mu = MuVector(only.event_count(), conf.mu);
    CHECK(check(only, mu, Criterion{CriterionKind::orderable_exact}).satisfied);
    CHECK(rhs(only, 0, mu, Criterion{}) == doctest::Approx(conf.q * (1 + conf.mu)));
    CHECK(close(ramsey_blue_bound(20, 3, 5), std::pow((1 - ramsey_config(20, 3).p) * (1 + 18 * ramsey_config(20, 3).mu), 10)));
}

TEST_CASE("red clique enumeration")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        std::size_t n = 6 + seed % 6, s = 3 + seed % 2;
        Stream rng(seed, Purpose::generator, 0x7au);
        Assignment colour(n * (n - 1) / 2);
        for (auto & x : colour)
            x = rng.uniform() < 0.6;
        std::vector<std::vector<std::uint32_t>> want;
        for (auto & set : subsets(n, s)) {
            bool red = true;
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t b = a + 1; b < s; ++b)
                    red = red && colour[edge_index(n, set[a], set[b])] == 1;
            if (red)
                want.push_back(set);
        }
        CHECK(red_cliques(n, s, colour) == want);
        CHECK(red_cliques(n, s, colour, 4) == want);
    }
}

TEST_CASE("fast ramsey solver is the lowest-id run")
{
    for (auto [n, s] : {std::pair{10, 3}, std::pair{12, 4}, std::pair{9, 3}})
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            auto [inst, config] = ramsey_build(n, s);
            auto seq = run(inst, seed);
            auto fast = ramsey_solve(n, s, seed, 2);
            REQUIRE(seq.stats.terminated);
            CHECK(fast.coloring == seq.assignment);
            CHECK(fast.resamples == seq.stats.steps);
            CHECK(red_cliques(n, s, fast.coloring).empty());
        }
}

TEST_CASE("blue cliques respect the terminal bound")
{
    std::size_t n = 10, s = 3, t = 4, runs = 20000;
    std::vector<std::uint32_t> target{0, 1, 2, 3};
    std::size_t blue = 0;
    for (std::uint64_t seed = 1; seed <= runs; ++seed)
        blue += is_blue_clique(n, target, ramsey_solve(n, s, seed).coloring);
    double bound = ramsey_blue_bound(n, s, t);
    double freq = static_cast<double>(blue) / static_cast<double>(runs);
    CHECK(freq <= bound + 3 * std::sqrt(bound * (1 - bound) / static_cast<double>(runs)));
}

TEST_CASE("graph files")
{
    auto g = read_edge_list_file(LLLMT_TEST_DATA "/c6.graph");
    CHECK(g.n == 6);
    CHECK(g.max_degree() == 2);
    auto cycle = read_cycle_file(LLLMT_TEST_DATA "/c6.cycle");
    CHECK(cycle.size() == 6);
    auto part = read_partition_file(LLLMT_TEST_DATA "/c6.partition");
    auto tb = transversal_build(g, part);
    CHECK(tb.instance.event_count() == 6);
    CHECK(tb.dropped_edges == 0);

    std::stringstream buf;
    write_edge_list(buf, g);
    CHECK(read_edge_list(buf).edges == g.edges);
    std::stringstream pbuf;
    write_partition(pbuf, part);
    CHECK(read_partition(pbuf) == part);

    CHECK_THROWS_AS((void)make_graph(3, {{0, 0}}), InputError);
    CHECK_THROWS_AS((void)make_graph(3, {{0, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS((void)make_graph(3, {{0, 3}}), InputError);
    std::istringstream bad("n 3\n0 1\n1 z\n");
    try {
        (void)read_edge_list(bad);
        FAIL("expected an error");
    }
    catch (const InputError & e) {
        CHECK(e.line() == 3);
    }
}
