#pragma once

#include <lllmt/model.hh>
#include <lllmt/sequential.hh>
#include <lllmt/vcmep.hh>
#include <lllmt/witness.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lllmt {

/// C_i = ceil(1 / (M q_i)), capped at m; q_i = 0 gives m.
[[nodiscard]] auto capacity(double q, std::size_t max_event_size, std::size_t event_count) -> std::uint32_t;

/// Directed conflicts among the selected events of one sub-round. Vertices are
/// kept in priority order (rho ascending, ties by id), and every edge points
/// from an earlier vertex to a later one, so the graph is acyclic.
struct ConflictGraph {
    std::vector<EventId> vertices;
    std::vector<std::vector<std::size_t>> out; ///< successor positions in `vertices`
};

/// Edge B1 -> B2 when B1 precedes B2 in priority, they share variable i, and x_{B1,i} != a_i.
[[nodiscard]] auto build_conflict_graph(const Instance & instance, std::span<const EventId> selected, std::span<const double> rho,
    const std::vector<std::vector<Value>> & proposals, std::span<const Value> a) -> ConflictGraph;

struct LfmisResult {
    std::vector<EventId> members;  ///< in priority order
    std::size_t iterations = 0;    ///< peeling rounds; bounds the longest directed path
};

/// Repeatedly takes all sources, then deletes them and their successors.
[[nodiscard]] auto lfmis_greedy(const ConflictGraph & g) -> LfmisResult;

struct SubRoundRecord {
    std::size_t t;
    std::size_t s;
    std::size_t v_size;
    std::size_t i_size;
    std::size_t i_prime_size;       ///< events whose proposals were applied
    std::size_t switched;
    std::size_t longest_path;       ///< LFMIS peeling rounds; 0 where no conflict graph is built
    std::optional<Assignment> state; ///< assignment after the sub-round, when requested
};

enum class Packer {
    greedy,     ///< lowest-id-first greedy packing
    randomized, ///< randomized rounding of fractional packings
};

struct ParallelOptions {
    std::size_t max_rounds = 10'000;
    bool record_states = false;
    unsigned threads = 1;
    Packer packer = Packer::greedy;
    VcmepOptions vcmep;
};

struct ParallelResult {
    Assignment assignment;
    std::vector<SubRoundRecord> trace;
    std::size_t rounds = 0;
    bool terminated = false;
    double psi = 0.0; ///< 1 - max_{i,j} P(X_i = j)
    std::vector<std::string> warnings;
    /// The resamplings flattened in execution order, as a sequential log.
    ExecutionLog log;
    std::vector<std::size_t> step_rounds; ///< round of each log step
};

[[nodiscard]] auto psi_margin(const VariableSpace & space) -> double;

/// Maximal variable-disjoint selection of true events per sub-round.
[[nodiscard]] auto run_simplified(const Instance & instance, std::uint64_t seed, const ParallelOptions & options = {}) -> ParallelResult;
/// Capacitated packing, proposals, priorities and LFMIS per sub-round.
[[nodiscard]] auto run_full(const Instance & instance, std::uint64_t seed, const ParallelOptions & options = {}) -> ParallelResult;
/// The same draws as run_full, applied sequentially in priority order to events that are still true.
[[nodiscard]] auto run_hybrid(const Instance & instance, std::uint64_t seed, const ParallelOptions & options = {}) -> ParallelResult;

/// Every resampling in round t has a witness tree of height exactly t.
[[nodiscard]] auto round_height_check(const Instance & instance, const ParallelResult & result) -> ReplayReport;

}
