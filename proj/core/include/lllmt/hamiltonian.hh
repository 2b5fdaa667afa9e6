#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/graph_io.hh>
#include <lllmt/model.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lllmt {

// Choose S so that no cycle edge has both ends in S (type A) and every vertex
// has itself or one of its non-cycle neighbours in S (type B). Membership is
// independent with probability p. With weights a (type A) and b (type B):
//     a >= p^2 (a + (1 + n_b b)^2)
//     b >= (1-p)^{k-1} (b + (1 + 2a)^{k-1})
// where n_b is the number of type-B events demanding a given vertex is outside S.

struct HamiltonWeights {
    double p;
    double a;
    double b;
};

/// Stable fixed point (a, b) at p, certified by a slightly inflated point
/// satisfying both inequalities; nullopt when the iteration diverges.
[[nodiscard]] auto hamiltonian_weights_at(std::size_t k, double p, std::size_t type_b_neighbours) -> std::optional<HamiltonWeights>;

struct HamiltonSearch {
    std::optional<HamiltonWeights> weights; ///< at the middle of the feasible range
    double p_low = 0, p_high = 0;           ///< feasible grid range, when found
    std::size_t feasible_points = 0;
};

/// Grid p = resolution, 2 resolution, ..., 0.5. type_b_neighbours defaults to k - 2.
[[nodiscard]] auto hamiltonian_search(std::size_t k, double resolution = 1e-4, std::optional<std::size_t> type_b_neighbours = {})
    -> HamiltonSearch;

/// Smallest k in [3, kmax] whose search succeeds.
[[nodiscard]] auto hamiltonian_threshold(double resolution = 1e-4, std::size_t kmax = 200) -> std::optional<std::size_t>;

struct HamiltonBuild {
    Instance instance;  ///< events 0..n-1: type A on cycle edge (C[i], C[i+1]); events n..2n-1: type B at vertex v
    std::size_t k = 0;
    double p = 0;
    double a = 0, b = 0;
    MuVector mu;
    std::vector<std::string> warnings;
};

/// Type-B events of the built instance meet k - 1 per vertex (the vertex's own event and one per
/// non-cycle neighbour), so p and the weights come from the search with n_b = k - 1.
/// Throws InputError unless G is k-regular and C is a Hamiltonian cycle of G.
[[nodiscard]] auto hamiltonian_build(const Graph & g, const std::vector<Vertex> & cycle, std::optional<double> p = {}) -> HamiltonBuild;

/// Circulant k-regular graph on n vertices: offsets 1..floor(k/2), plus n/2 when k is odd.
/// Vertex labels are shuffled under `seed` (seed 0 keeps them); returns the graph and its
/// Hamiltonian cycle (the image of 0, 1, ..., n-1).
[[nodiscard]] auto circulant_regular(std::size_t n, std::size_t k, std::uint64_t seed = 0) -> std::pair<Graph, std::vector<Vertex>>;

/// The vertices in S under an assignment of the built instance.
[[nodiscard]] auto selected_vertices(std::span<const Value> assignment) -> std::vector<Vertex>;

}
