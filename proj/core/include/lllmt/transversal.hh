#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/graph_io.hh>
#include <lllmt/model.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace lllmt {

// Pick one vertex per class (uniformly, independently) so that no edge has
// both ends picked. Each edge event has probability 1/b^2, and the criterion reads
//     alpha >= b^{-2} (alpha + (1 + (b-1) Delta alpha)^2).

[[nodiscard]] auto transversal_threshold(std::size_t max_degree) -> std::size_t;
[[nodiscard]] auto transversal_rhs(std::size_t b, std::size_t max_degree, double alpha) -> double;

/// Exact: some alpha satisfies the criterion iff b + 1 >= 4 Delta (integer discriminant test).
[[nodiscard]] auto transversal_feasible(std::size_t b, std::size_t max_degree) -> bool;
/// Least alpha meeting the criterion with equality (smaller quadratic root), if any.
[[nodiscard]] auto transversal_alpha(std::size_t b, std::size_t max_degree) -> std::optional<double>;
/// Smallest alpha passing transversal_check, found by Newton on rhs(alpha) - alpha from 0.
[[nodiscard]] auto transversal_fixed_point(std::size_t b, std::size_t max_degree, std::size_t max_iters = 200)
    -> std::optional<double>;
/// alpha >= rhs (1 - tolerance). At b = 4 Delta - 1 the root is a double root, so
/// an exact comparison can fail by rounding; the default tolerance absorbs that.
[[nodiscard]] auto transversal_check(std::size_t b, std::size_t max_degree, double alpha, double relative_tolerance = 1e-12) -> bool;

struct TransversalBuild {
    Instance instance;   ///< variable = class, value = position within the class
    std::size_t b = 0;
    std::size_t max_degree = 0;
    std::vector<std::pair<Vertex, Vertex>> event_edges; ///< edge behind each event
    std::size_t dropped_edges = 0;                      ///< edges inside one class, never both chosen
    std::optional<double> alpha;
    MuVector mu;
};

/// The partition must cover every vertex exactly once with classes of one size; throws InputError otherwise.
[[nodiscard]] auto transversal_build(const Graph & g, const std::vector<std::vector<Vertex>> & partition) -> TransversalBuild;

/// The chosen vertex of each class.
[[nodiscard]] auto chosen_vertices(const std::vector<std::vector<Vertex>> & partition, std::span<const Value> assignment)
    -> std::vector<Vertex>;
[[nodiscard]] auto is_independent(const Graph & g, std::span<const Vertex> vertices) -> bool;

/// `classes` classes of size b (class i holds vertices i b .. i b + b - 1) and random
/// edges between distinct classes, keeping every degree at most Delta.
[[nodiscard]] auto random_partitioned_graph(std::size_t classes, std::size_t b, std::size_t max_degree, std::uint64_t seed)
    -> std::pair<Graph, std::vector<std::vector<Vertex>>>;

}
