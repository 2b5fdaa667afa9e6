#include <lllmt/hamiltonian.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lllmt {

namespace {

struct Map {
    double pa, pb; // p^2 and (1-p)^{k-1}
    double nb, ka; // type-B neighbours and k - 1

    auto a(double a, double b) const { return pa * (a + std::pow(1 + nb * b, 2)); }
    auto b(double a, double b) const { return pb * (b + std::pow(1 + 2 * a, ka)); }
};

}

auto hamiltonian_weights_at(std::size_t k, double p, std::size_t type_b_neighbours) -> std::optional<HamiltonWeights>
{
    if (k < 3 || ! (p > 0 && p < 1))
        return std::nullopt;
    auto kd = static_cast<double>(k);
    Map f{p * p, std::pow(1 - p, kd - 1), static_cast<double>(type_b_neighbours), kd - 1};
    // The fixed point of (1 + eta) F lies strictly above F, which survives rounding.
    for (double eta : {1e-10, 1e-8, 1e-6}) {
        double a = f.pa, b = f.pb;
        bool converged = false;
        for (int it = 0; it < 100'000; ++it) {
            double na = (1 + eta) * f.a(a, b), nb = (1 + eta) * f.b(a, b);
            if (! std::isfinite(na) || ! std::isfinite(nb) || na > 1e6 || nb > 1e6)
                return std::nullopt;
            double change = std::max(std::abs(na - a) / na, std::abs(nb - b) / nb);
            a = na;
            b = nb;
            if (change < 1e-15) {
                converged = true;
                break;
            }
        }
        if (converged && a >= f.a(a, b) && b >= f.b(a, b))
            return HamiltonWeights{p, a, b};
    }
    return std::nullopt;
}

auto hamiltonian_search(std::size_t k, double resolution, std::optional<std::size_t> type_b_neighbours) -> HamiltonSearch
{
    if (! (resolution > 0 && resolution <= 0.5))
        throw InputError("resolution must lie in (0, 0.5]");
    std::size_t nb = type_b_neighbours.value_or(k >= 2 ? k - 2 : 0);
    auto steps = static_cast<std::size_t>(std::floor(0.5 / resolution + 1e-9));
    HamiltonSearch out;
    std::optional<std::size_t> first, last;
    for (std::size_t i = 1; i <= steps; ++i)
        if (hamiltonian_weights_at(k, static_cast<double>(i) * resolution, nb)) {
            if (! first)
                first = i;
            last = i;
            ++out.feasible_points;
        }
    if (! first)
        return out;
    out.p_low = static_cast<double>(*first) * resolution;
    out.p_high = static_cast<double>(*last) * resolution;
    // the feasible set is an interval in practice; fall back to scanning if the middle fails
    auto mid = (*first + *last) / 2;
    out.weights = hamiltonian_weights_at(k, static_cast<double>(mid) * resolution, nb);
    for (auto i = *first; ! out.weights && i <= *last; ++i)
        out.weights = hamiltonian_weights_at(k, static_cast<double>(i) * resolution, nb);
    return out;
}

auto hamiltonian_threshold(double resolution, std::size_t kmax) -> std::optional<std::size_t>
{
    for (std::size_t k = 3; k <= kmax; ++k)
        if (hamiltonian_search(k, resolution).weights)
            return k;
    return std::nullopt;
}

auto hamiltonian_build(const Graph & g, const std::vector<Vertex> & cycle, std::optional<double> p) -> HamiltonBuild
{
    std::size_t n = g.n;
    if (n < 3)
        throw InputError("graph needs at least 3 vertices");
    auto deg = g.degrees();
    std::size_t k = deg[0];
    for (Vertex v = 0; v < n; ++v)
        if (deg[v] != k)
            throw InputError("graph is not regular: vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v])
                + ", vertex 0 has " + std::to_string(k));
    if (k < 3)
        throw InputError("graph must be k-regular with k >= 3");
    if (cycle.size() != n)
        throw InputError("cycle has " + std::to_string(cycle.size()) + " vertices, graph has " + std::to_string(n));
    std::vector<char> seen(n, 0);
    for (auto v : cycle) {
        if (v >= n || seen[v])
            throw InputError("cycle is not a permutation of the vertices (vertex " + std::to_string(v) + ")");
        seen[v] = 1;
    }
    std::vector<std::pair<Vertex, Vertex>> cycle_edges;
    for (std::size_t i = 0; i < n; ++i) {
        Vertex u = cycle[i], v = cycle[(i + 1) % n];
        if (! g.has_edge(u, v))
            throw InputError("cycle step " + std::to_string(u) + " -> " + std::to_string(v) + " is not an edge");
        cycle_edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(cycle_edges.begin(), cycle_edges.end());

    HamiltonBuild out;
    out.k = k;
    auto search = hamiltonian_search(k, 1e-4, k - 1);
    if (p) {
        out.p = *p;
        if (auto w = hamiltonian_weights_at(k, *p, k - 1)) {
            out.a = w->a;
            out.b = w->b;
        }
        else
            out.warnings.push_back("no weights satisfy the criterion at p = " + std::to_string(*p));
    }
    else if (search.weights) {
        out.p = search.weights->p;
        out.a = search.weights->a;
        out.b = search.weights->b;
    }
    else {
        out.p = 1.0 / static_cast<double>(k);
        out.warnings.push_back("criterion is not satisfiable at degree " + std::to_string(k) + "; using p = 1/k");
    }

    std::vector<BadEvent> events;
    events.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        events.push_back(BadEvent{{cycle[i], 1}, {cycle[(i + 1) % n], 1}});
    auto adj = g.adjacency();
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Term> terms{{v, 0}};
        for (auto w : adj[v])
            if (! std::binary_search(cycle_edges.begin(), cycle_edges.end(), std::pair{std::min(v, w), std::max(v, w)}))
                terms.push_back({w, 0});
        events.emplace_back(std::move(terms));
    }
    std::vector<std::vector<double>> probs(n, {1 - out.p, out.p});
    out.instance = Instance(VariableSpace(std::move(probs)), std::move(events));
    out.mu.assign(2 * n, 0.0);
    std::fill(out.mu.begin(), out.mu.begin() + static_cast<std::ptrdiff_t>(n), out.a);
    std::fill(out.mu.begin() + static_cast<std::ptrdiff_t>(n), out.mu.end(), out.b);
    return out;
}

auto circulant_regular(std::size_t n, std::size_t k, std::uint64_t seed) -> std::pair<Graph, std::vector<Vertex>>
{
    std::size_t half = k / 2;
    if (k < 2 || n < 2 * half + 1 + (k % 2) || (k % 2 == 1 && n % 2 == 1))
        throw InputError("no circulant " + std::to_string(k) + "-regular graph on " + std::to_string(n) + " vertices");
    std::vector<Vertex> label(n);
    std::iota(label.begin(), label.end(), Vertex{0});
    if (seed != 0) {
        Stream rng(seed, Purpose::generator, 0x4a3);
        for (std::size_t i = n; i > 1; --i)
            std::swap(label[i - 1], label[rng.below(i)]);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 1; d <= half; ++d)
            edges.emplace_back(label[i], label[(i + d) % n]);
        if (k % 2 == 1 && i < n / 2)
            edges.emplace_back(label[i], label[i + n / 2]);
    }
    return {make_graph(n, std::move(edges)), label};
}

auto selected_vertices(std::span<const Value> assignment) -> std::vector<Vertex>
{
    std::vector<Vertex> s;
    for (Vertex v = 0; v < assignment.size(); ++v)
        if (assignment[v] == 1)
            s.push_back(v);
    return s;
}

}
