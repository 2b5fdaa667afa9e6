#pragma once

#include <lllmt/model.hh>
#include <lllmt/sequential.hh>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lllmt {

struct WitnessNode {
    EventId label;
    std::size_t depth;                 ///< root has depth 1
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children; ///< in insertion order
    bool alive = true;
};

/// Rooted tree of event labels. Node indices are stable; removed nodes stay
/// in storage marked dead. A default-constructed tree is the null tree.
class WitnessTree {
public:
    WitnessTree() = default;
    explicit WitnessTree(EventId root_label);

    auto add_child(std::size_t parent, EventId label) -> std::size_t;
    /// Removes a live leaf. Throws std::logic_error for inner or dead nodes.
    void remove_leaf(std::size_t node);

    [[nodiscard]] auto empty() const -> bool { return _live == 0; }
    [[nodiscard]] auto size() const -> std::size_t { return _live; }
    [[nodiscard]] auto node(std::size_t k) const -> const WitnessNode & { return _nodes.at(k); }
    [[nodiscard]] auto storage_size() const -> std::size_t { return _nodes.size(); }
    [[nodiscard]] auto height() const -> std::size_t;
    /// Live nodes in preorder (children visited in insertion order).
    [[nodiscard]] auto preorder() const -> std::vector<std::size_t>;
    [[nodiscard]] auto labels() const -> std::vector<EventId>;

    /// Shape-and-label form with children sorted, so equal iff the labelled trees are isomorphic.
    [[nodiscard]] auto canonical() const -> std::string;
    [[nodiscard]] auto hash() const -> std::size_t;
    /// One line per node: indentation, then `depth eventId`.
    [[nodiscard]] auto dump() const -> std::string;

    auto operator==(const WitnessTree & other) const -> bool { return canonical() == other.canonical(); }

private:
    std::vector<WitnessNode> _nodes;
    std::size_t _live = 0;
};

/// Tree for the resampling at step t using only steps t0..t. t0 > t gives the
/// null tree. Throws std::out_of_range unless 1 <= t <= log size.
[[nodiscard]] auto build_witness_tree(const Instance & instance, const ExecutionLog & log, std::size_t t, std::size_t t0 = 1) -> WitnessTree;

/// Active value per variable; nullopt is the sure value. Throws std::logic_error
/// if deepest nodes involving a variable disagree on it.
[[nodiscard]] auto active_values(const Instance & instance, const WitnessTree & tree) -> std::vector<std::optional<Value>>;

/// Product of label probabilities; 1 for the null tree.
[[nodiscard]] auto weight(const Instance & instance, const WitnessTree & tree) -> double;

/// Structural invariants of built trees: distinct orderable child labels per
/// node, distinct depths for same-label leaves, agreement of deepest nodes.
[[nodiscard]] auto check_tree_invariants(const Instance & instance, const WitnessTree & tree) -> std::optional<std::string>;

/// Drops the deepest leaf labelled `event`, if any. Returns whether one was removed.
auto peel(WitnessTree & tree, EventId event) -> bool;

struct ReplayReport {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Forward replay for the tree at step t: peeling agrees with backward builds
/// for every t0, and the live state before each step t0 matches the active
/// values of the tree built from t0.
[[nodiscard]] auto verify_replay(const Instance & instance, const ExecutionLog & log, std::size_t t) -> ReplayReport;

/// Trees for distinct steps of one log are pairwise distinct.
[[nodiscard]] auto verify_distinct(const Instance & instance, const ExecutionLog & log) -> ReplayReport;

}
