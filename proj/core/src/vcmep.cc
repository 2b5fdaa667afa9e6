#include <lllmt/vcmep.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>
#include <lllmt/workers.hh>

#include "text.hh"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace lllmt {

auto CapacitatedHypergraph::max_edge_size() const -> std::size_t
{
    std::size_t k = 0;
    for (auto & e : edges)
        k = std::max(k, e.size());
    return k;
}

void validate(const CapacitatedHypergraph & g)
{
    if (g.capacity.size() != g.vertex_count)
        throw InputError("capacity list has " + std::to_string(g.capacity.size()) + " entries for "
            + std::to_string(g.vertex_count) + " vertices");
    for (std::size_t v = 0; v < g.vertex_count; ++v)
        if (g.capacity[v] > g.edges.size())
            throw InputError("capacity of vertex " + std::to_string(v) + " exceeds the edge count");
    for (std::size_t f = 0; f < g.edges.size(); ++f) {
        auto e = g.edges[f];
        if (e.empty())
            throw InputError("edge " + std::to_string(f) + " is empty");
        std::sort(e.begin(), e.end());
        if (e.back() >= g.vertex_count)
            throw InputError("edge " + std::to_string(f) + " names a vertex out of range");
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw InputError("edge " + std::to_string(f) + " repeats a vertex");
    }
}

auto make_packing(const CapacitatedHypergraph & g, std::span<const std::uint32_t> edges) -> Packing
{
    Packing p;
    p.edges.assign(edges.begin(), edges.end());
    std::sort(p.edges.begin(), p.edges.end());
    p.load.assign(g.vertex_count, 0);
    for (auto f : p.edges)
        for (auto v : g.edges.at(f))
            ++p.load[v];
    return p;
}

auto is_feasible(const CapacitatedHypergraph & g, const Packing & p) -> bool
{
    auto check = make_packing(g, p.edges);
    if (std::adjacent_find(check.edges.begin(), check.edges.end()) != check.edges.end())
        return false;
    for (std::size_t v = 0; v < g.vertex_count; ++v)
        if (check.load[v] > g.capacity[v])
            return false;
    return true;
}

auto is_maximal(const CapacitatedHypergraph & g, const Packing & p) -> bool
{
    auto check = make_packing(g, p.edges);
    std::vector<char> in(g.edges.size(), 0);
    for (auto f : check.edges)
        in[f] = 1;
    for (std::size_t f = 0; f < g.edges.size(); ++f) {
        if (in[f])
            continue;
        bool blocked = std::any_of(g.edges[f].begin(), g.edges[f].end(), [&](auto v) { return check.load[v] >= g.capacity[v]; });
        if (! blocked)
            return false;
    }
    return true;
}

auto vcmep_greedy(const CapacitatedHypergraph & g, std::span<const std::uint32_t> order) -> Packing
{
    validate(g);
    std::vector<std::uint32_t> natural;
    if (order.empty()) {
        natural.resize(g.edges.size());
        std::iota(natural.begin(), natural.end(), 0);
        order = natural;
    }
    else {
        std::vector<std::uint32_t> sorted(order.begin(), order.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            if (sorted[k] != k || sorted.size() != g.edges.size())
                throw InputError("edge order is not a permutation of the edge indices");
    }

    Packing p;
    p.load.assign(g.vertex_count, 0);
    for (auto f : order) {
        auto & e = g.edges[f];
        if (std::all_of(e.begin(), e.end(), [&](auto v) { return p.load[v] < g.capacity[v]; })) {
            p.edges.push_back(f);
            for (auto v : e)
                ++p.load[v];
        }
    }
    std::sort(p.edges.begin(), p.edges.end());
    return p;
}

auto water_filling(std::size_t vertex_count, std::span<const std::vector<std::uint32_t>> edges, std::span<const double> capacity,
    double eps) -> std::vector<double>
{
    std::vector<double> x(edges.size(), 0.0), used(vertex_count, 0.0);
    std::vector<char> active(edges.size(), 1);
    std::vector<std::size_t> degree(vertex_count);
    std::size_t left = edges.size();

    auto tight = [&](std::uint32_t v) { return used[v] >= (1.0 - eps) * capacity[v] - 1e-12; };
    for (std::size_t f = 0; f < edges.size(); ++f)
        if (std::any_of(edges[f].begin(), edges[f].end(), tight)) {
            active[f] = 0;
            --left;
        }

    while (left > 0) {
        std::fill(degree.begin(), degree.end(), 0);
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < edges.size(); ++f)
            if (active[f]) {
                step = std::min(step, 1.0 - x[f]);
                for (auto v : edges[f])
                    ++degree[v];
            }
        for (std::size_t v = 0; v < vertex_count; ++v)
            if (degree[v] > 0)
                step = std::min(step, ((1.0 - eps) * capacity[v] - used[v]) / static_cast<double>(degree[v]));
        step = std::max(step, 0.0);
        for (std::size_t f = 0; f < edges.size(); ++f)
            if (active[f]) {
                x[f] += step;
                for (auto v : edges[f])
                    used[v] += step;
            }
        for (std::size_t f = 0; f < edges.size(); ++f)
            if (active[f] && (x[f] >= 1.0 - 1e-12 || std::any_of(edges[f].begin(), edges[f].end(), tight))) {
                active[f] = 0;
                --left;
            }
    }
    for (auto & v : x)
        v = std::min(v, 1.0);
    return x;
}

auto max_packing_size(const CapacitatedHypergraph & g) -> std::size_t
{
    auto m = g.edges.size();
    if (m > 24)
        throw CapacityExceeded("exhaustive maximum packing is limited to 24 edges");
    std::size_t best = 0;
    std::vector<std::uint32_t> load(g.vertex_count);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size <= best)
            continue;
        std::fill(load.begin(), load.end(), 0);
        bool ok = true;
        for (std::size_t f = 0; f < m && ok; ++f)
            if (mask >> f & 1)
                for (auto v : g.edges[f])
                    if (++load[v] > g.capacity[v])
                        ok = false;
        if (ok)
            best = size;
    }
    return best;
}

auto default_round_cap(const CapacitatedHypergraph & g) -> std::size_t
{
    double k = static_cast<double>(std::max<std::size_t>(1, g.max_edge_size()));
    return static_cast<std::size_t>(std::ceil(50.0 * k * std::log(static_cast<double>(g.edges.size()) + 2.0)));
}

namespace {

// Potential: best extension of the current packing minus its size.
auto potential(const CapacitatedHypergraph & g, const std::vector<char> & in, const std::vector<std::uint32_t> & load) -> std::size_t
{
    CapacitatedHypergraph residual;
    residual.vertex_count = g.vertex_count;
    residual.capacity.resize(g.vertex_count);
    for (std::size_t v = 0; v < g.vertex_count; ++v)
        residual.capacity[v] = g.capacity[v] - load[v];
    for (std::size_t f = 0; f < g.edges.size(); ++f)
        if (! in[f])
            residual.edges.push_back(g.edges[f]);
    return max_packing_size(residual);
}

}

auto vcmep_parallel_sim(const CapacitatedHypergraph & g, std::uint64_t seed, const VcmepOptions & options) -> VcmepResult
{
    validate(g);
    if (! (options.eps > 0.0 && options.eps <= 0.5))
        throw InputError("vcmep eps must lie in (0, 1/2]");
    auto m = g.edges.size();
    double k = static_cast<double>(std::max<std::size_t>(1, g.max_edge_size()));
    auto cap = options.max_rounds.value_or(default_round_cap(g));
    bool tiny = m <= 10;

    VcmepResult result;
    std::vector<char> in(m, 0);
    std::vector<std::uint32_t> load(g.vertex_count, 0);

    for (std::size_t round = 1;; ++round) {
        std::vector<std::uint32_t> residual;
        for (std::size_t f = 0; f < m; ++f)
            if (! in[f] && std::all_of(g.edges[f].begin(), g.edges[f].end(), [&](auto v) { return load[v] < g.capacity[v]; }))
                residual.push_back(static_cast<std::uint32_t>(f));
        if (residual.empty()) {
            result.terminated = true;
            break;
        }
        if (round > cap)
            break;

        VcmepRound rec{round, residual.size(), 0.0, 0, 0, 0, std::nullopt};
        if (tiny)
            rec.phi = potential(g, in, load);

        std::vector<std::vector<std::uint32_t>> redges;
        redges.reserve(residual.size());
        for (auto f : residual)
            redges.push_back(g.edges[f]);
        std::vector<double> rcap(g.vertex_count);
        for (std::size_t v = 0; v < g.vertex_count; ++v)
            rcap[v] = static_cast<double>(g.capacity[v] - load[v]);
        auto x = water_filling(g.vertex_count, redges, rcap, options.eps);
        rec.fractional_value = std::accumulate(x.begin(), x.end(), 0.0);

        std::vector<char> selected(residual.size(), 0);
        parallel_for(residual.size(), [&](std::size_t r) {
            selected[r] = Stream(seed, Purpose::packing, round, residual[r]).uniform() < x[r] / (2.0 * k);
        }, options.threads);

        std::vector<std::uint32_t> extra(g.vertex_count, 0);
        for (std::size_t r = 0; r < residual.size(); ++r)
            if (selected[r]) {
                ++rec.selected;
                for (auto v : redges[r])
                    ++extra[v];
            }
        for (std::size_t r = 0; r < residual.size(); ++r) {
            if (! selected[r])
                continue;
            bool violated = std::any_of(redges[r].begin(), redges[r].end(), [&](auto v) { return load[v] + extra[v] > g.capacity[v]; });
            if (violated) {
                selected[r] = 0;
                ++rec.deselected;
            }
        }
        for (std::size_t r = 0; r < residual.size(); ++r)
            if (selected[r]) {
                in[residual[r]] = 1;
                for (auto v : redges[r])
                    ++load[v];
            }
        rec.packing_size = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
        result.trace.push_back(rec);
    }

    std::vector<std::uint32_t> chosen;
    for (std::size_t f = 0; f < m; ++f)
        if (in[f])
            chosen.push_back(static_cast<std::uint32_t>(f));
    result.packing = make_packing(g, chosen);
    if (tiny)
        result.final_phi = potential(g, in, load);
    return result;
}

auto read_hypergraph(std::istream & in, std::uint32_t default_capacity) -> CapacitatedHypergraph
{
    CapacitatedHypergraph g;
    std::optional<std::size_t> n;
    std::vector<std::optional<std::uint32_t>> caps;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto tok = text::tokens(text::strip_comment(raw));
        if (tok.empty())
            continue;
        if (tok[0] == "v") {
            if (tok.size() != 2)
                throw InputError(line, "expected 'v <count>'");
            if (n)
                throw InputError(line, "vertex count given twice");
            n = text::parse_number<std::size_t>(tok[1], line, "vertex count");
            caps.assign(*n, std::nullopt);
        }
        else if (! n)
            throw InputError(line, "'v <count>' must come first");
        else if (tok[0] == "cap") {
            if (tok.size() != 3)
                throw InputError(line, "expected 'cap <v> <C>'");
            auto v = text::parse_number<std::size_t>(tok[1], line, "vertex");
            if (v >= *n)
                throw InputError(line, "vertex " + std::to_string(v) + " out of range");
            if (caps[v])
                throw InputError(line, "capacity of vertex " + std::to_string(v) + " given twice");
            caps[v] = text::parse_number<std::uint32_t>(tok[2], line, "capacity");
        }
        else if (tok[0] == "edge") {
            if (tok.size() < 2)
                throw InputError(line, "edge without vertices");
            std::vector<std::uint32_t> e;
            for (std::size_t q = 1; q < tok.size(); ++q) {
                auto v = text::parse_number<std::uint32_t>(tok[q], line, "vertex");
                if (v >= *n)
                    throw InputError(line, "vertex " + std::to_string(v) + " out of range");
                if (std::find(e.begin(), e.end(), v) != e.end())
                    throw InputError(line, "edge repeats vertex " + std::to_string(v));
                e.push_back(v);
            }
            g.edges.push_back(std::move(e));
        }
        else
            throw InputError(line, "unknown directive '" + tok[0] + "'");
    }
    if (! n)
        throw InputError("missing 'v <count>' line");
    g.vertex_count = *n;
    for (std::size_t v = 0; v < *n; ++v)
        g.capacity.push_back(caps[v].value_or(std::min<std::uint32_t>(default_capacity, static_cast<std::uint32_t>(g.edges.size()))));
    for (std::size_t v = 0; v < *n; ++v)
        if (g.capacity[v] > g.edges.size())
            throw InputError("capacity of vertex " + std::to_string(v) + " exceeds the edge count " + std::to_string(g.edges.size()));
    return g;
}

auto read_hypergraph_file(const std::string & path, std::uint32_t default_capacity) -> CapacitatedHypergraph
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open " + path);
    return read_hypergraph(in, default_capacity);
}

void write_hypergraph(std::ostream & out, const CapacitatedHypergraph & g)
{
    out << "v " << g.vertex_count << '\n';
    for (std::size_t v = 0; v < g.vertex_count; ++v)
        out << "cap " << v << ' ' << g.capacity[v] << '\n';
    for (auto & e : g.edges) {
        out << "edge";
        for (auto v : e)
            out << ' ' << v;
        out << '\n';
    }
}

}
