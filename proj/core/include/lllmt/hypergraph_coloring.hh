#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/model.hh>
#include <lllmt/vcmep.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace lllmt {

enum class HypergraphCriterion {
    improved, ///< orderable-set bound for c-colouring a k-uniform hypergraph of max degree L
    original, ///< lopsidependency bound alpha >= c^{-k} (alpha + (1 + alpha)^D)
};

/// alpha >= c^{-k} [(1+y)^k + alpha (c-1) ((1+y)^k - y^k) + alpha], y = alpha (c-1)(L-1).
[[nodiscard]] auto hypergraph_improved_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double;
/// D = k (L-1)(c-1) + (c-1) lopsidependent neighbours per event.
[[nodiscard]] auto hypergraph_original_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double;
[[nodiscard]] auto hypergraph_rhs(HypergraphCriterion kind, std::size_t c, std::size_t k, double L, double alpha) -> double;

/// Weight maximizing alpha - rhs(alpha) over (0, 1e6], if that slack is
/// nonnegative. Log-spaced scan, then golden-section refinement.
[[nodiscard]] auto hypergraph_alpha(HypergraphCriterion kind, std::size_t c, std::size_t k, double L) -> std::optional<double>;

/// Asymptotic bound L <= c^k (1 - 1/k)^{k-1} / ((c-1) k).
[[nodiscard]] auto hypergraph_closed_form_l(std::size_t c, std::size_t k) -> double;
/// alpha = ((c^k / ((c-1) k L))^{1/(k-1)} - 1) / ((c-1) L), the weight behind the asymptotic bound.
[[nodiscard]] auto hypergraph_asymptotic_alpha(std::size_t c, std::size_t k, double L) -> double;
/// c^{-k} (1 + alpha (c-1) L)^k, the large-L approximation of the improved right side.
[[nodiscard]] auto hypergraph_asymptotic_rhs(std::size_t c, std::size_t k, double L, double alpha) -> double;

/// Largest integer L for which a weight exists; 0 when even L = 1 fails.
[[nodiscard]] auto hypergraph_lmax(std::size_t c, std::size_t k, HypergraphCriterion kind) -> std::size_t;

struct HypergraphTableRow {
    std::size_t k;
    std::size_t l_improved;
    std::size_t l_original;
};

[[nodiscard]] auto hypergraph_table(std::size_t c, std::size_t kmin, std::size_t kmax) -> std::vector<HypergraphTableRow>;

struct HypergraphColorBuild {
    Instance instance;       ///< event edge * c + colour: every vertex of the edge has that colour
    std::size_t c = 0;
    std::size_t k = 0;
    std::size_t L = 0;       ///< max vertex degree
    std::optional<double> alpha; ///< improved-criterion weight at L, if one exists
    MuVector mu;             ///< alpha (or 0) per event
};

/// Throws InputError for c < 2, no edges, or edges of unequal size.
[[nodiscard]] auto hypergraph_build(std::size_t vertex_count, const std::vector<std::vector<std::uint32_t>> & edges, std::size_t c)
    -> HypergraphColorBuild;

/// Random k-uniform hypergraph on n vertices with m edges and max degree at most L.
/// Each edge picks k distinct vertices of remaining degree below L; throws InputError if nL < mk.
[[nodiscard]] auto random_uniform_hypergraph(std::size_t n, std::size_t k, std::size_t m, std::size_t L, std::uint64_t seed)
    -> CapacitatedHypergraph;

/// A proper colouring leaves no edge monochromatic.
[[nodiscard]] auto is_proper_coloring(const std::vector<std::vector<std::uint32_t>> & edges, std::span<const Value> colors) -> bool;

}
