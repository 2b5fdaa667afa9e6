#include <lllmt/transversal.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>

#include <algorithm>
#include <cmath>
#include <set>

namespace lllmt {

auto transversal_threshold(std::size_t max_degree) -> std::size_t
{
    return max_degree == 0 ? 1 : 4 * max_degree - 1;
}

auto transversal_rhs(std::size_t b, std::size_t max_degree, double alpha) -> double
{
    double bd = static_cast<double>(b);
    double d = (bd - 1) * static_cast<double>(max_degree);
    return (alpha + std::pow(1 + d * alpha, 2)) / (bd * bd);
}

auto transversal_feasible(std::size_t b, std::size_t max_degree) -> bool
{
    // D^2 a^2 + (2D + 1 - b^2) a + 1 = 0 has a nonnegative root iff b^2 - 1 >= 4D.
    if (b < 2)
        return false;
    return b * b - 1 >= 4 * (b - 1) * max_degree;
}

auto transversal_alpha(std::size_t b, std::size_t max_degree) -> std::optional<double>
{
    if (! transversal_feasible(b, max_degree))
        return std::nullopt;
    auto bb = static_cast<double>(b * b);
    if (max_degree == 0)
        return 1 / (bb - 1);
    auto lin = static_cast<double>(b * b - 2 * (b - 1) * max_degree - 1);
    auto disc = static_cast<double>((b * b - 1) * (b * b - 1 - 4 * (b - 1) * max_degree)); // exact
    // smaller root, written to avoid cancellation
    return 2 / (lin + std::sqrt(disc));
}

auto transversal_fixed_point(std::size_t b, std::size_t max_degree, std::size_t max_iters) -> std::optional<double>
{
    // Newton on g(a) = rhs(a) - a. g is a convex quadratic, so from a = 0 the iterates
    // climb monotonically to the smaller root; at the tangent b = 4D - 1 the root is
    // double and Newton still halves the error each step, where plain iteration of rhs
    // is only sublinear. Past the minimum of g with g still positive there is no root.
    double bb = static_cast<double>(b * b);
    double d = static_cast<double>((b - 1) * max_degree);
    double alpha = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        if (transversal_check(b, max_degree, alpha))
            return alpha;
        double g = transversal_rhs(b, max_degree, alpha) - alpha;
        double slope = (1 + 2 * d * (1 + d * alpha)) / bb - 1;
        if (slope >= 0 || ! std::isfinite(g))
            return std::nullopt;
        alpha -= g / slope;
    }
    return std::nullopt;
}

auto transversal_check(std::size_t b, std::size_t max_degree, double alpha, double relative_tolerance) -> bool
{
    double rhs = transversal_rhs(b, max_degree, alpha);
    return alpha >= 0 && std::isfinite(rhs) && alpha >= rhs * (1 - relative_tolerance);
}

auto transversal_build(const Graph & g, const std::vector<std::vector<Vertex>> & partition) -> TransversalBuild
{
    if (partition.empty())
        throw InputError("partition has no classes");
    std::size_t b = partition.front().size();
    if (b == 0)
        throw InputError("partition classes are empty");
    std::vector<std::optional<std::pair<VarId, Value>>> place(g.n);
    for (std::size_t c = 0; c < partition.size(); ++c) {
        if (partition[c].size() != b)
            throw InputError("class " + std::to_string(c) + " has " + std::to_string(partition[c].size()) + " vertices, expected "
                + std::to_string(b));
        for (std::size_t j = 0; j < b; ++j) {
            auto v = partition[c][j];
            if (v >= g.n)
                throw InputError("class " + std::to_string(c) + " names vertex " + std::to_string(v) + " out of range");
            if (place[v])
                throw InputError("vertex " + std::to_string(v) + " appears in two classes");
            place[v] = std::pair{static_cast<VarId>(c), static_cast<Value>(j)};
        }
    }
    for (Vertex v = 0; v < g.n; ++v)
        if (! place[v])
            throw InputError("vertex " + std::to_string(v) + " is in no class");

    TransversalBuild out;
    out.b = b;
    out.max_degree = g.max_degree();
    std::vector<BadEvent> events;
    for (auto [u, v] : g.edges) {
        auto [cu, ju] = *place[u];
        auto [cv, jv] = *place[v];
        if (cu == cv) {
            ++out.dropped_edges;
            continue;
        }
        events.push_back(BadEvent{{cu, ju}, {cv, jv}});
        out.event_edges.emplace_back(u, v);
    }
    out.instance = Instance(VariableSpace::uniform(partition.size(), b), std::move(events));
    out.alpha = transversal_alpha(b, out.max_degree);
    out.mu.assign(out.instance.event_count(), out.alpha.value_or(0.0));
    return out;
}

auto chosen_vertices(const std::vector<std::vector<Vertex>> & partition, std::span<const Value> assignment) -> std::vector<Vertex>
{
    std::vector<Vertex> out;
    for (std::size_t c = 0; c < partition.size(); ++c)
        out.push_back(partition[c].at(assignment[c]));
    return out;
}

auto is_independent(const Graph & g, std::span<const Vertex> vertices) -> bool
{
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (g.has_edge(vertices[i], vertices[j]))
                return false;
    return true;
}

auto random_partitioned_graph(std::size_t classes, std::size_t b, std::size_t max_degree, std::uint64_t seed)
    -> std::pair<Graph, std::vector<std::vector<Vertex>>>
{
    if (classes < 2 || b < 1)
        throw InputError("need at least 2 classes of positive size");
    std::size_t n = classes * b;
    std::vector<std::vector<Vertex>> partition(classes);
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t j = 0; j < b; ++j)
            partition[c].push_back(static_cast<Vertex>(c * b + j));
    Stream rng(seed, Purpose::generator, 0x7a5);
    std::vector<std::size_t> degree(n, 0);
    std::set<std::pair<Vertex, Vertex>> edges;
    for (std::size_t attempt = 0; attempt < 8 * n * max_degree; ++attempt) {
        auto u = static_cast<Vertex>(rng.below(n));
        auto v = static_cast<Vertex>(rng.below(n));
        if (u / b == v / b || degree[u] >= max_degree || degree[v] >= max_degree)
            continue;
        if (edges.emplace(std::min(u, v), std::max(u, v)).second) {
            ++degree[u];
            ++degree[v];
        }
    }
    return {make_graph(n, {edges.begin(), edges.end()}), partition};
}

}
