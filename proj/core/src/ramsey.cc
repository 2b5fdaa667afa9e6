#include <lllmt/ramsey.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>
#include <lllmt/workers.hh>

#include <cmath>

namespace lllmt {

auto binomial(std::size_t n, std::size_t k) -> double
{
    if (k > n)
        return 0;
    double r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

auto ramsey_config(std::size_t n, std::size_t s) -> RamseyConfig
{
    if (s < 3)
        throw InputError("clique size s must be at least 3");
    if (n < s)
        throw InputError("need n >= s");
    double sd = static_cast<double>(s), nd = static_cast<double>(n);
    double fact = std::tgamma(sd - 1); // (s-2)!
    double pairs = sd * (sd - 1) / 2;
    RamseyConfig cfg;
    cfg.n = n;
    cfg.s = s;
    cfg.p = std::pow(2 * fact / ((sd - 1) * sd), 2 / (sd * sd - sd - 2)) * std::pow(nd, -2 / (sd + 1));
    if (! (cfg.p > 0 && cfg.p < 1))
        throw InputError("red probability falls outside (0, 1) for n = " + std::to_string(n));
    cfg.q = std::pow(cfg.p, pairs);
    cfg.mu = cfg.q / (1 - cfg.q);
    cfg.c_s = std::pow(2 / sd - 2 / (sd - 1) + 1, (sd + 1) / 2) * std::pow(2 * fact / (sd * std::pow(sd - 1, pairs)), 1 / (sd - 2));
    cfg.c_s_prime = std::pow(2 * fact / (sd * (sd - 1)), 2 / (sd * sd - sd - 2)) * (1 + 2 / (sd - sd * sd));
    return cfg;
}

auto edge_index(std::size_t n, std::uint32_t u, std::uint32_t v) -> VarId
{
    if (u > v)
        std::swap(u, v);
    // edges (0,1..n-1), (1,2..n-1), ...
    return static_cast<VarId>(u * (2 * n - u - 1) / 2 + (v - u - 1));
}

namespace {

// Calls f on every s-subset of 0..n-1 in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t s, F && f)
{
    std::vector<std::uint32_t> c(s);
    for (std::size_t i = 0; i < s; ++i)
        c[i] = static_cast<std::uint32_t>(i);
    while (true) {
        f(c);
        std::size_t i = s;
        while (i > 0 && c[i - 1] == n - s + i - 1)
            --i;
        if (i == 0)
            return;
        ++c[i - 1];
        for (std::size_t j = i; j < s; ++j)
            c[j] = c[j - 1] + 1;
    }
}

auto clique_terms(std::size_t n, std::span<const std::uint32_t> vertices) -> std::vector<Term>
{
    std::vector<Term> terms;
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            terms.push_back({edge_index(n, vertices[a], vertices[b]), 1});
    return terms;
}

}

auto ramsey_build(std::size_t n, std::size_t s) -> std::pair<Instance, RamseyConfig>
{
    auto cfg = ramsey_config(n, s);
    if (binomial(n, s) > static_cast<double>(ramsey_event_cap))
        throw InputError("C(" + std::to_string(n) + ", " + std::to_string(s) + ") events exceed the enumeration cap");
    std::vector<BadEvent> events;
    for_each_subset(n, s, [&](auto & c) { events.emplace_back(clique_terms(n, c)); });
    std::vector<std::vector<double>> probs(n * (n - 1) / 2, {1 - cfg.p, cfg.p});
    return {Instance(VariableSpace(std::move(probs)), std::move(events)), cfg};
}

auto ramsey_blue_bound(std::size_t n, std::size_t s, std::size_t t) -> double
{
    auto cfg = ramsey_config(n, s);
    return std::pow((1 - cfg.p) * (1 + binomial(n - 2, s - 2) * cfg.mu), binomial(t, 2));
}

auto red_cliques(std::size_t n, std::size_t s, std::span<const Value> coloring, unsigned threads) -> std::vector<std::vector<std::uint32_t>>
{
    auto red = [&](std::uint32_t u, std::uint32_t v) { return coloring[edge_index(n, u, v)] == 1; };
    std::vector<std::vector<std::vector<std::uint32_t>>> by_first(n);
    parallel_for(n, [&](std::size_t first) {
        // grow red K_l one vertex at a time; candidates are later vertices red to all members
        std::vector<std::uint32_t> clique{static_cast<std::uint32_t>(first)};
        auto grow = [&](auto & self, std::vector<std::uint32_t> candidates) -> void {
            if (clique.size() == s) {
                by_first[first].push_back(clique);
                return;
            }
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                auto v = candidates[i];
                std::vector<std::uint32_t> next;
                for (std::size_t j = i + 1; j < candidates.size(); ++j)
                    if (red(v, candidates[j]))
                        next.push_back(candidates[j]);
                if (next.size() + clique.size() + 1 < s)
                    continue;
                clique.push_back(v);
                self(self, std::move(next));
                clique.pop_back();
            }
        };
        std::vector<std::uint32_t> start;
        for (auto v = static_cast<std::uint32_t>(first + 1); v < n; ++v)
            if (red(static_cast<std::uint32_t>(first), v))
                start.push_back(v);
        grow(grow, std::move(start));
    }, threads);
    std::vector<std::vector<std::uint32_t>> out;
    for (auto & part : by_first)
        for (auto & c : part)
            out.push_back(std::move(c));
    return out;
}

auto ramsey_solve(std::size_t n, std::size_t s, std::uint64_t seed, unsigned threads) -> RamseySolve
{
    auto cfg = ramsey_config(n, s);
    std::size_t edges = n * (n - 1) / 2;
    RamseySolve out;
    out.coloring.resize(edges);
    const double probs[2] = {1 - cfg.p, cfg.p};
    for (VarId e = 0; e < edges; ++e)
        out.coloring[e] = Stream(seed, Purpose::initial, e).categorical(probs);
    auto cliques = red_cliques(n, s, out.coloring, threads);
    out.initial_red = cliques.size();
    std::size_t step = 0;
    for (auto & c : cliques) {
        auto terms = clique_terms(n, c);
        auto is_red = [&] {
            return std::all_of(terms.begin(), terms.end(), [&](auto & t) { return out.coloring[t.var] == 1; });
        };
        while (is_red()) {
            ++step;
            for (auto & t : terms)
                out.coloring[t.var] = Stream(seed, Purpose::resample, step, t.var).categorical(probs);
        }
    }
    out.resamples = step;
    return out;
}

auto is_blue_clique(std::size_t n, std::span<const std::uint32_t> vertices, std::span<const Value> coloring) -> bool
{
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            if (coloring[edge_index(n, vertices[a], vertices[b])] != 0)
                return false;
    return true;
}

}
