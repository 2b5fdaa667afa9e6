#include <lllmt/hypergraph_coloring.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>
#include <lllmt/workers.hh>

#include <algorithm>
#include <cmath>

namespace lllmt {

auto hypergraph_improved_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double
{
    double cd = static_cast<double>(c), kd = static_cast<double>(k);
    double y = alpha * (cd - 1) * (L - 1);
    double full = std::pow(1 + y, kd);
    return std::pow(cd, -kd) * (full + alpha * (cd - 1) * (full - std::pow(y, kd)) + alpha);
}

auto hypergraph_original_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double
{
    double cd = static_cast<double>(c), kd = static_cast<double>(k);
    double d = kd * (L - 1) * (cd - 1) + (cd - 1);
    return std::pow(cd, -kd) * (alpha + std::pow(1 + alpha, d));
}

auto hypergraph_rhs(HypergraphCriterion kind, std::size_t c, std::size_t k, double L, double alpha) -> double
{
    return kind == HypergraphCriterion::improved ? hypergraph_improved_rhs(c, k, L, alpha) : hypergraph_original_rhs(c, k, L, alpha);
}

auto hypergraph_alpha(HypergraphCriterion kind, std::size_t c, std::size_t k, double L) -> std::optional<double>
{
    auto slack = [&](double a) {
        double s = a - hypergraph_rhs(kind, c, k, L, a);
        return std::isfinite(s) ? s : -HUGE_VAL;
    };
    constexpr double lo = -12, hi = 6;
    constexpr int steps = 3600;
    auto at = [&](int i) { return std::pow(10.0, lo + (hi - lo) * i / steps); };
    int best = 0;
    double best_slack = slack(at(0));
    for (int i = 1; i <= steps; ++i)
        if (double s = slack(at(i)); s > best_slack) {
            best = i;
            best_slack = s;
        }
    // golden section on log10(alpha) over the neighbouring grid cells
    double a = lo + (hi - lo) * std::max(best - 1, 0) / steps;
    double b = lo + (hi - lo) * std::min(best + 1, steps) / steps;
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = slack(std::pow(10.0, x1)), f2 = slack(std::pow(10.0, x2));
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = slack(std::pow(10.0, x2));
        }
        else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = slack(std::pow(10.0, x1));
        }
    }
    double alpha = f1 >= f2 ? std::pow(10.0, x1) : std::pow(10.0, x2);
    double s = std::max(f1, f2);
    if (best_slack > s) {
        alpha = at(best);
        s = best_slack;
    }
    if (s >= 0)
        return alpha;
    return std::nullopt;
}

auto hypergraph_closed_form_l(std::size_t c, std::size_t k) -> double
{
    double cd = static_cast<double>(c), kd = static_cast<double>(k);
    return std::pow(cd, kd) * std::pow(1 - 1 / kd, kd - 1) / ((cd - 1) * kd);
}

auto hypergraph_asymptotic_alpha(std::size_t c, std::size_t k, double L) -> double
{
    double cd = static_cast<double>(c), kd = static_cast<double>(k);
    return (std::pow(std::pow(cd, kd) / ((cd - 1) * kd * L), 1 / (kd - 1)) - 1) / ((cd - 1) * L);
}

auto hypergraph_asymptotic_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double
{
    double cd = static_cast<double>(c), kd = static_cast<double>(k);
    return std::pow(cd, -kd) * std::pow(1 + alpha * (cd - 1) * L, kd);
}

auto hypergraph_lmax(std::size_t c, std::size_t k, HypergraphCriterion kind) -> std::size_t
{
    if (c < 2 || k < 2)
        throw InputError("need c >= 2 and k >= 2");
    auto feasible = [&](std::size_t L) { return hypergraph_alpha(kind, c, k, static_cast<double>(L)).has_value(); };
    auto L = static_cast<std::size_t>(std::floor(hypergraph_closed_form_l(c, k))) + 5;
    while (feasible(L)) // the start is meant to be infeasible; move up if it is not
        L += 5;
    while (L > 0 && ! feasible(L))
        --L;
    return L;
}

auto hypergraph_table(std::size_t c, std::size_t kmin, std::size_t kmax) -> std::vector<HypergraphTableRow>
{
    if (kmin < 2 || kmax < kmin)
        throw InputError("need 2 <= kmin <= kmax");
    std::vector<HypergraphTableRow> rows(kmax - kmin + 1);
    parallel_for(rows.size(), [&](std::size_t i) {
        std::size_t k = kmin + i;
        rows[i] = {k, hypergraph_lmax(c, k, HypergraphCriterion::improved), hypergraph_lmax(c, k, HypergraphCriterion::original)};
    });
    return rows;
}

auto hypergraph_build(std::size_t vertex_count, const std::vector<std::vector<std::uint32_t>> & edges, std::size_t c)
    -> HypergraphColorBuild
{
    if (c < 2)
        throw InputError("need at least 2 colours");
    if (edges.empty())
        throw InputError("hypergraph has no edges");
    std::size_t k = edges.front().size();
    std::vector<std::size_t> degree(vertex_count, 0);
    for (std::size_t f = 0; f < edges.size(); ++f) {
        if (edges[f].size() != k)
            throw InputError("edge " + std::to_string(f) + " has size " + std::to_string(edges[f].size()) + ", expected " + std::to_string(k));
        for (auto v : edges[f]) {
            if (v >= vertex_count)
                throw InputError("edge " + std::to_string(f) + " names vertex " + std::to_string(v) + " out of range");
            ++degree[v];
        }
    }
    std::vector<BadEvent> events;
    events.reserve(edges.size() * c);
    for (auto & edge : edges)
        for (std::size_t col = 0; col < c; ++col) {
            std::vector<Term> terms;
            for (auto v : edge)
                terms.push_back({v, static_cast<Value>(col)});
            events.emplace_back(std::move(terms));
        }
    HypergraphColorBuild out{Instance(VariableSpace::uniform(vertex_count, c), std::move(events)), c, k,
        *std::max_element(degree.begin(), degree.end()), std::nullopt, {}};
    out.alpha = hypergraph_alpha(HypergraphCriterion::improved, c, k, static_cast<double>(out.L));
    out.mu.assign(out.instance.event_count(), out.alpha.value_or(0.0));
    return out;
}

auto random_uniform_hypergraph(std::size_t n, std::size_t k, std::size_t m, std::size_t L, std::uint64_t seed)
    -> CapacitatedHypergraph
{
    if (k < 2 || k > n)
        throw InputError("need 2 <= k <= n");
    if (n * L < m * k)
        throw InputError("n L must be at least m k");
    for (std::uint64_t attempt = 0;; ++attempt) {
        Stream rng(seed, Purpose::generator, 0x4c0, attempt);
        std::vector<std::size_t> degree(n, 0);
        CapacitatedHypergraph g{n, std::vector<std::uint32_t>(n, 1), {}};
        bool stuck = false;
        for (std::size_t f = 0; f < m && ! stuck; ++f) {
            std::vector<std::uint32_t> open;
            for (std::uint32_t v = 0; v < n; ++v)
                if (degree[v] < L)
                    open.push_back(v);
            if (open.size() < k) {
                stuck = true;
                break;
            }
            // prefer low-degree vertices so the degree budget is spread evenly
            for (std::size_t i = open.size(); i > 1; --i)
                std::swap(open[i - 1], open[rng.below(i)]);
            std::stable_sort(open.begin(), open.end(), [&](auto a, auto b) { return degree[a] < degree[b]; });
            std::vector<std::uint32_t> edge(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(edge.begin(), edge.end());
            for (auto v : edge)
                ++degree[v];
            g.edges.push_back(std::move(edge));
        }
        if (! stuck)
            return g;
    }
}

auto is_proper_coloring(const std::vector<std::vector<std::uint32_t>> & edges, std::span<const Value> colors) -> bool
{
    return std::none_of(edges.begin(), edges.end(), [&](auto & edge) {
        return std::all_of(edge.begin(), edge.end(), [&](auto v) { return colors[v] == colors[edge.front()]; });
    });
}

}
