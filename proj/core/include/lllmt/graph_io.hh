#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lllmt {

using Vertex = std::uint32_t;

/// Simple undirected graph; edges are stored with u < v, without duplicates.
struct Graph {
    std::size_t n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;

    [[nodiscard]] auto adjacency() const -> std::vector<std::vector<Vertex>>;
    [[nodiscard]] auto degrees() const -> std::vector<std::size_t>;
    [[nodiscard]] auto max_degree() const -> std::size_t;
    [[nodiscard]] auto has_edge(Vertex u, Vertex v) const -> bool;
};

/// Normalizes edge orientation, sorts, and rejects loops, duplicates and out-of-range vertices (InputError).
[[nodiscard]] auto make_graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges) -> Graph;

/// Edge list: optional `n <count>` header, then one `u v` pair per line; '#' comments.
/// Without a header the vertex count is one more than the largest vertex.
[[nodiscard]] auto read_edge_list(std::istream & in) -> Graph;
[[nodiscard]] auto read_edge_list_file(const std::string & path) -> Graph;
void write_edge_list(std::ostream & out, const Graph & g);

/// One class per line, as whitespace-separated vertices.
[[nodiscard]] auto read_partition(std::istream & in) -> std::vector<std::vector<Vertex>>;
[[nodiscard]] auto read_partition_file(const std::string & path) -> std::vector<std::vector<Vertex>>;
void write_partition(std::ostream & out, const std::vector<std::vector<Vertex>> & classes);

/// Vertex sequence of a cycle, whitespace separated over any number of lines.
[[nodiscard]] auto read_cycle(std::istream & in) -> std::vector<Vertex>;
[[nodiscard]] auto read_cycle_file(const std::string & path) -> std::vector<Vertex>;

}
