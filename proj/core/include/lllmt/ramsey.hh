#pragma once

#include <lllmt/model.hh>
#include <lllmt/sequential.hh>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lllmt {

// Edges of K_n are coloured red with probability p; the bad-events are red
// copies of K_s. A red K_s disagrees with no other red K_s, so each event is
// lopsidependent only with itself, and resampling one never makes another true.

struct RamseyConfig {
    std::size_t n = 0;
    std::size_t s = 0;
    double p = 0;   ///< (2 (s-2)! / ((s-1) s))^{2/(s^2-s-2)} n^{-2/(s+1)}
    double q = 0;   ///< p^{C(s,2)}
    double mu = 0;  ///< q / (1 - q)
    double c_s = 0;
    double c_s_prime = 0;
};

[[nodiscard]] auto ramsey_config(std::size_t n, std::size_t s) -> RamseyConfig;
[[nodiscard]] auto binomial(std::size_t n, std::size_t k) -> double;

/// Index of edge {u, v} (u != v) among the C(n, 2) variables, lexicographic in (min, max).
[[nodiscard]] auto edge_index(std::size_t n, std::uint32_t u, std::uint32_t v) -> VarId;

inline constexpr std::size_t ramsey_event_cap = 2'000'000;

/// One event per s-subset, in lexicographic order. Throws InputError when s < 3,
/// s > n, or C(n, s) exceeds ramsey_event_cap.
[[nodiscard]] auto ramsey_build(std::size_t n, std::size_t s) -> std::pair<Instance, RamseyConfig>;

/// ((1 - p)(1 + C(n-2, s-2) mu))^{C(t,2)}: bound on P(a given t-set is blue) at termination.
[[nodiscard]] auto ramsey_blue_bound(std::size_t n, std::size_t s, std::size_t t) -> double;

/// Red s-cliques of a colouring, each as its sorted vertex list, in lexicographic order.
/// Branches over red cliques by first vertex, in parallel.
[[nodiscard]] auto red_cliques(std::size_t n, std::size_t s, std::span<const Value> coloring, unsigned threads = 1)
    -> std::vector<std::vector<std::uint32_t>>;

struct RamseySolve {
    Assignment coloring;            ///< value 1 = red
    std::size_t initial_red = 0;    ///< red cliques after the initial draw
    std::size_t resamples = 0;
};

/// Draws the colouring and clears red cliques in lexicographic order, resampling each until
/// it is not red. Since no new red clique can appear, this is exactly the sequential
/// lowest-id run on ramsey_build(n, s) with the same seed, without building the instance.
[[nodiscard]] auto ramsey_solve(std::size_t n, std::size_t s, std::uint64_t seed, unsigned threads = 1) -> RamseySolve;

/// True iff all C(t,2) edges among the vertices are blue.
[[nodiscard]] auto is_blue_clique(std::size_t n, std::span<const std::uint32_t> vertices, std::span<const Value> coloring) -> bool;

}
