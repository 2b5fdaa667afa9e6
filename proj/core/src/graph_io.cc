#include <lllmt/graph_io.hh>

#include <lllmt/errors.hh>

#include "text.hh"

#include <algorithm>
#include <fstream>
#include <optional>

namespace lllmt {

auto Graph::adjacency() const -> std::vector<std::vector<Vertex>>
{
    std::vector<std::vector<Vertex>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto & a : adj)
        std::sort(a.begin(), a.end());
    return adj;
}

auto Graph::degrees() const -> std::vector<std::size_t>
{
    std::vector<std::size_t> d(n, 0);
    for (auto [u, v] : edges) {
        ++d[u];
        ++d[v];
    }
    return d;
}

auto Graph::max_degree() const -> std::size_t
{
    auto d = degrees();
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

auto Graph::has_edge(Vertex u, Vertex v) const -> bool
{
    if (u > v)
        std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::pair{u, v});
}

auto make_graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges) -> Graph
{
    for (auto & [u, v] : edges) {
        if (u >= n || v >= n)
            throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") names a vertex out of range");
        if (u == v)
            throw InputError("loop at vertex " + std::to_string(u));
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end())
        throw InputError("duplicate edge (" + std::to_string(it->first) + "," + std::to_string(it->second) + ")");
    return Graph{n, std::move(edges)};
}

namespace {

auto open(const std::string & path) -> std::ifstream
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open " + path);
    return in;
}

}

auto read_edge_list(std::istream & in) -> Graph
{
    std::optional<std::size_t> n;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::size_t largest = 0;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto tok = text::tokens(text::strip_comment(raw));
        if (tok.empty())
            continue;
        if (tok[0] == "n") {
            if (tok.size() != 2 || n || ! edges.empty())
                throw InputError(line, "'n <count>' must be a single header line before the edges");
            n = text::parse_number<std::size_t>(tok[1], line, "vertex count");
            continue;
        }
        if (tok.size() != 2)
            throw InputError(line, "expected 'u v'");
        auto u = text::parse_number<Vertex>(tok[0], line, "vertex");
        auto v = text::parse_number<Vertex>(tok[1], line, "vertex");
        if (n && (u >= *n || v >= *n))
            throw InputError(line, "vertex out of range");
        if (u == v)
            throw InputError(line, "loop at vertex " + std::to_string(u));
        largest = std::max<std::size_t>(largest, std::max(u, v) + 1);
        edges.emplace_back(u, v);
    }
    return make_graph(n.value_or(largest), std::move(edges));
}

auto read_edge_list_file(const std::string & path) -> Graph
{
    auto in = open(path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream & out, const Graph & g)
{
    out << "n " << g.n << '\n';
    for (auto [u, v] : g.edges)
        out << u << ' ' << v << '\n';
}

auto read_partition(std::istream & in) -> std::vector<std::vector<Vertex>>
{
    std::vector<std::vector<Vertex>> classes;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto tok = text::tokens(text::strip_comment(raw));
        if (tok.empty())
            continue;
        std::vector<Vertex> cls;
        for (auto & t : tok)
            cls.push_back(text::parse_number<Vertex>(t, line, "vertex"));
        classes.push_back(std::move(cls));
    }
    return classes;
}

auto read_partition_file(const std::string & path) -> std::vector<std::vector<Vertex>>
{
    auto in = open(path);
    return read_partition(in);
}

void write_partition(std::ostream & out, const std::vector<std::vector<Vertex>> & classes)
{
    for (auto & cls : classes) {
        for (std::size_t k = 0; k < cls.size(); ++k)
            out << (k ? " " : "") << cls[k];
        out << '\n';
    }
}

auto read_cycle(std::istream & in) -> std::vector<Vertex>
{
    std::vector<Vertex> cycle;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        for (auto & t : text::tokens(text::strip_comment(raw)))
            cycle.push_back(text::parse_number<Vertex>(t, line, "vertex"));
    }
    return cycle;
}

auto read_cycle_file(const std::string & path) -> std::vector<Vertex>
{
    auto in = open(path);
    return read_cycle(in);
}

}
