#pragma once

#include <lllmt/model.hh>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lllmt {

/// Nonnegative weight per bad-event, indexed by EventId.
using MuVector = std::vector<double>;

enum class CriterionKind {
    symmetric_lll,     ///< e p (d + 1) <= 1 over the lopsidependency graph
    asymmetric_lll,    ///< mu(B) >= P(B) prod over the inclusive dependency neighbourhood of (1 + mu)
    llll,              ///< mu(B) >= P(B) [mu(B) + prod over lopsidependent B' of (1 + mu(B'))]
    llll_variable,     ///< LLLL with neighbours counted per disagreeing term
    pegden_general,    ///< mu(B) >= P(B) [mu(B) + sum over independent sets of neighbours]
    pegden_variable,   ///< prod over terms of (1 + sum of mu over all events on that variable)
    blend_closed_form, ///< mu(B) + prod over terms of (1 + sum of mu over disagreeing events)
    orderable_exact,   ///< sum over orderable sets (the sharpest criterion)
    assignable_exact,  ///< sum over assignable sets
};

enum class NeighborRelation {
    lopsidependency, ///< disagree on some variable
    dependency,      ///< share some variable
};

inline constexpr std::size_t default_enumeration_cap = 10'000'000;

struct Criterion {
    CriterionKind kind = CriterionKind::orderable_exact;
    /// Slack: every right-hand side is multiplied by (1 + epsilon).
    double epsilon = 0.0;
    /// Neighbour relation for pegden_general and for the degree in symmetric_lll.
    NeighborRelation relation = NeighborRelation::lopsidependency;
    /// Per-target cap on enumerated subsets (exact kinds and pegden_general).
    std::size_t enumeration_cap = default_enumeration_cap;
};

[[nodiscard]] auto to_string(CriterionKind kind) -> std::string_view;
/// Accepts the to_string spellings and their dash-separated forms. Throws InputError.
[[nodiscard]] auto parse_criterion_kind(std::string_view text) -> CriterionKind;
[[nodiscard]] auto all_criterion_kinds() -> std::span<const CriterionKind>;

/// Throws InputError unless mu has one finite nonnegative entry per event.
void validate_mu(const Instance & instance, std::span<const double> mu);

/// Term positions of `target` on which `event` disagrees.
[[nodiscard]] auto disagreement_positions(const BadEvent & target, const BadEvent & event) -> std::vector<std::uint32_t>;

/// Orderability test for an explicit set (no duplicates allowed). `target_id`
/// is the target's id if it is itself a bad-event of the instance, which
/// enables the singleton case Y = {target}.
[[nodiscard]] auto is_orderable(const Instance & instance, const BadEvent & target, std::optional<EventId> target_id,
    std::span<const EventId> set) -> bool;

/// Orderability over precomputed disagreement positions: true iff the sets can be
/// ordered so that each contributes a position not covered by its predecessors.
[[nodiscard]] auto orderable_positions(std::span<const std::vector<std::uint32_t>> positions, std::size_t target_size) -> bool;

[[nodiscard]] auto is_assignable(const Instance & instance, const BadEvent & target, std::optional<EventId> target_id,
    std::span<const EventId> set) -> bool;

using SetVisitor = std::function<void(std::span<const EventId>)>;

/// Streams every subset orderable to the target (including the empty set, and
/// {target} when the target is a member). Each set is yielded once, sorted.
/// Throws CapacityExceeded after `cap` sets.
void for_each_orderable_set(const Instance & instance, EventId target, std::size_t cap, const SetVisitor & visit);
void for_each_orderable_set(const Instance & instance, const BadEvent & external_target, std::size_t cap, const SetVisitor & visit);
void for_each_assignable_set(const Instance & instance, EventId target, std::size_t cap, const SetVisitor & visit);

[[nodiscard]] auto orderable_sets(const Instance & instance, EventId target, std::size_t cap = default_enumeration_cap)
    -> std::vector<std::vector<EventId>>;
[[nodiscard]] auto orderable_sets(const Instance & instance, const BadEvent & external_target, std::size_t cap = default_enumeration_cap)
    -> std::vector<std::vector<EventId>>;
[[nodiscard]] auto assignable_sets(const Instance & instance, EventId target, std::size_t cap = default_enumeration_cap)
    -> std::vector<std::vector<EventId>>;

/// Independent sets (under `relation`) of the `relation`-neighbours of target, including the empty set.
[[nodiscard]] auto independent_neighbor_sets(const Instance & instance, EventId target, NeighborRelation relation,
    std::size_t cap = default_enumeration_cap) -> std::vector<std::vector<EventId>>;

/// Sum over subsets of the product of their weights.
[[nodiscard]] auto family_weight(std::span<const std::vector<EventId>> family, std::span<const double> mu) -> double;

/// Precomputes whatever a criterion needs (subset families, symmetric
/// constants) so that right-hand sides can be evaluated repeatedly.
class CriterionEvaluator {
public:
    CriterionEvaluator(const Instance & instance, Criterion criterion);

    [[nodiscard]] auto criterion() const -> const Criterion & { return _criterion; }
    [[nodiscard]] auto instance() const -> const Instance & { return *_instance; }

    /// Right-hand side for event `id`, including the (1 + epsilon) factor.
    [[nodiscard]] auto rhs(EventId id, std::span<const double> mu) const -> double;
    /// Left-hand side: mu(id), or the constant 1 for symmetric_lll.
    [[nodiscard]] auto lhs(EventId id, std::span<const double> mu) const -> double;

private:
    const Instance * _instance;
    Criterion _criterion;
    std::vector<std::vector<std::vector<EventId>>> _families;
    double _symmetric_rhs = 0.0;
};

/// Single right-hand side evaluation (enumerates on the fly for exact kinds).
[[nodiscard]] auto rhs(const Instance & instance, EventId id, std::span<const double> mu, const Criterion & criterion) -> double;

struct EventCheck {
    EventId id;
    double mu;
    double rhs;
    bool ok;
};

struct CriterionReport {
    Criterion criterion;
    std::vector<EventCheck> events;
    double total_weight = 0.0; ///< W = sum of mu
    bool satisfied = true;
};

/// Per-event test lhs >= rhs * (1 - relative_tolerance). The default tolerance
/// is zero; a positive value is only meant for criteria that hold with
/// equality at a tangent point, where floating point cannot decide.
[[nodiscard]] auto check(const CriterionEvaluator & evaluator, std::span<const double> mu, double relative_tolerance = 0.0) -> CriterionReport;
[[nodiscard]] auto check(const Instance & instance, std::span<const double> mu, const Criterion & criterion,
    double relative_tolerance = 0.0) -> CriterionReport;

struct FixedPointOptions {
    std::size_t max_iters = 100'000;
    double divergence_cap = 1e9;
    double convergence_tolerance = 1e-12;
};

struct MuSearchResult {
    bool found = false;
    MuVector mu;            ///< certified weights when found; the last iterate otherwise
    std::size_t iterations = 0;
    std::string reason;     ///< why the search stopped; "no mu found" does not mean none exists
};

/// Least-fixed-point search: mu_0 = (1 + eps) P, mu_{r+1} = rhs(mu_r). Iterates
/// increase monotonically; on convergence the result is nudged upward until
/// it passes `check` strictly.
[[nodiscard]] auto find_mu_fixed_point(const CriterionEvaluator & evaluator, const FixedPointOptions & options = {}) -> MuSearchResult;
[[nodiscard]] auto find_mu_fixed_point(const Instance & instance, const Criterion & criterion, const FixedPointOptions & options = {})
    -> MuSearchResult;

}
