#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lllmt {

/// Hypergraph with per-vertex capacities. Vertices are 0..vertex_count-1;
/// edges are vertex lists without repeats.
struct CapacitatedHypergraph {
    std::size_t vertex_count = 0;
    std::vector<std::uint32_t> capacity;
    std::vector<std::vector<std::uint32_t>> edges;

    [[nodiscard]] auto max_edge_size() const -> std::size_t;
};

/// Throws InputError for empty edges, repeated or out-of-range vertices,
/// a capacity vector of the wrong length, or capacities above the edge count.
void validate(const CapacitatedHypergraph & g);

struct Packing {
    std::vector<std::uint32_t> edges; ///< selected edge indices, ascending
    std::vector<std::uint32_t> load;  ///< per-vertex count of selected edges
};

[[nodiscard]] auto make_packing(const CapacitatedHypergraph & g, std::span<const std::uint32_t> edges) -> Packing;
[[nodiscard]] auto is_feasible(const CapacitatedHypergraph & g, const Packing & p) -> bool;
/// Every edge outside the packing touches a saturated vertex.
[[nodiscard]] auto is_maximal(const CapacitatedHypergraph & g, const Packing & p) -> bool;

/// Adds edges in the given order whenever they fit. `order` must be a
/// permutation of the edge indices; empty means natural order.
[[nodiscard]] auto vcmep_greedy(const CapacitatedHypergraph & g, std::span<const std::uint32_t> order = {}) -> Packing;

/// Fractional packing of the given edges under the given capacities by
/// water-filling: all unfrozen fractions rise together; an edge freezes at 1
/// or when one of its vertices reaches (1 - eps) of its capacity.
[[nodiscard]] auto water_filling(std::size_t vertex_count, std::span<const std::vector<std::uint32_t>> edges,
    std::span<const double> capacity, double eps) -> std::vector<double>;

/// Largest packing size, by exhaustive search (small graphs only).
[[nodiscard]] auto max_packing_size(const CapacitatedHypergraph & g) -> std::size_t;

struct VcmepRound {
    std::size_t round;
    std::size_t residual_edges;
    double fractional_value;
    std::size_t selected;
    std::size_t deselected;
    std::size_t packing_size;          ///< |L| after the round
    std::optional<std::size_t> phi;    ///< potential before the round, on graphs with at most 10 edges
};

struct VcmepOptions {
    double eps = 0.25;
    std::optional<std::size_t> max_rounds; ///< default 50 k log(m + 2)
    unsigned threads = 1;
};

struct VcmepResult {
    Packing packing;
    std::vector<VcmepRound> trace;
    bool terminated = false;
    std::optional<std::size_t> final_phi;
};

[[nodiscard]] auto default_round_cap(const CapacitatedHypergraph & g) -> std::size_t;

/// Randomized rounding of water-filling packings until maximal. Draws come
/// from the packing stream keyed by (round, edge) under `seed`.
[[nodiscard]] auto vcmep_parallel_sim(const CapacitatedHypergraph & g, std::uint64_t seed, const VcmepOptions & options = {}) -> VcmepResult;

/// Text format: `v <count>`, `cap <v> <C>`, `edge <v1> <v2> ...`; '#' comments.
/// Vertices without a cap line get `default_capacity`.
[[nodiscard]] auto read_hypergraph(std::istream & in, std::uint32_t default_capacity = 1) -> CapacitatedHypergraph;
[[nodiscard]] auto read_hypergraph_file(const std::string & path, std::uint32_t default_capacity = 1) -> CapacitatedHypergraph;
void write_hypergraph(std::ostream & out, const CapacitatedHypergraph & g);

}
