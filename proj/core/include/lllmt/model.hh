#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lllmt {

using VarId = std::uint32_t;
using Value = std::uint32_t;
using EventId = std::uint32_t;

/// One demand X_var = value.
struct Term {
    VarId var;
    Value value;

    auto operator<=>(const Term &) const = default;
};

/// n independent discrete variables; variable i takes value j with probability probs[i][j].
/// Domains are {0, ..., d_i - 1}.
class VariableSpace {
public:
    VariableSpace() = default;
    explicit VariableSpace(std::vector<std::vector<double>> probs);

    static auto uniform(std::size_t n, std::size_t domain) -> VariableSpace;

    [[nodiscard]] auto size() const -> std::size_t { return _probs.size(); }
    [[nodiscard]] auto domain_size(VarId i) const -> std::size_t { return _probs.at(i).size(); }
    [[nodiscard]] auto prob(VarId i, Value j) const -> double { return _probs.at(i).at(j); }
    [[nodiscard]] auto probs(VarId i) const -> std::span<const double> { return _probs.at(i); }
    [[nodiscard]] auto max_domain_size() const -> std::size_t;

private:
    std::vector<std::vector<double>> _probs;
};

/// Current value of every variable.
using Assignment = std::vector<Value>;

/// Atomic bad-event: conjunction of terms, stored sorted by variable.
class BadEvent {
public:
    BadEvent() = default;
    explicit BadEvent(std::vector<Term> terms);
    BadEvent(std::initializer_list<Term> terms) : BadEvent(std::vector<Term>(terms)) {}

    [[nodiscard]] auto terms() const -> std::span<const Term> { return _terms; }
    [[nodiscard]] auto size() const -> std::size_t { return _terms.size(); }
    [[nodiscard]] auto empty() const -> bool { return _terms.empty(); }

    /// Value demanded on variable i, if any. Events that demand two values of
    /// one variable are invalid; for those this returns the first.
    [[nodiscard]] auto demand(VarId i) const -> std::optional<Value>;
    [[nodiscard]] auto involves(VarId i) const -> bool { return demand(i).has_value(); }

    auto operator==(const BadEvent &) const -> bool = default;

private:
    std::vector<Term> _terms;
};

/// True iff every term of the event holds under the assignment.
/// Throws std::out_of_range if the event names a variable beyond the assignment.
[[nodiscard]] auto is_true(const BadEvent & event, std::span<const Value> assignment) -> bool;

/// True iff the two events disagree on some shared variable.
[[nodiscard]] auto lopsidependent(const BadEvent & a, const BadEvent & b) -> bool;

/// True iff the two events share a variable, whether they agree or disagree there.
[[nodiscard]] auto share_variable(const BadEvent & a, const BadEvent & b) -> bool;

/// Product-measure probability of the event.
[[nodiscard]] auto event_prob(const BadEvent & event, const VariableSpace & space) -> double;

struct ValidationIssue {
    std::optional<EventId> event;
    std::optional<VarId> var;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    [[nodiscard]] auto ok() const -> bool { return issues.empty(); }
    [[nodiscard]] auto summary() const -> std::string;
};

inline constexpr double normalization_tolerance = 1e-12;

[[nodiscard]] auto validate(const VariableSpace & space, std::span<const BadEvent> events) -> ValidationReport;

/// Thrown by Instance construction when validation fails.
class InvalidInstance : public std::exception {
public:
    explicit InvalidInstance(ValidationReport report);
    [[nodiscard]] auto what() const noexcept -> const char * override { return _message.c_str(); }
    [[nodiscard]] auto report() const -> const ValidationReport & { return _report; }

private:
    ValidationReport _report;
    std::string _message;
};

/// Validated, immutable LLLL instance with a precomputed lopsidependency
/// relation and per-(variable, value) occurrence indices. Safe to share
/// between threads.
class Instance {
public:
    Instance() = default;
    Instance(VariableSpace space, std::vector<BadEvent> events);

    [[nodiscard]] auto space() const -> const VariableSpace & { return _space; }
    [[nodiscard]] auto variable_count() const -> std::size_t { return _space.size(); }
    [[nodiscard]] auto event_count() const -> std::size_t { return _events.size(); }
    [[nodiscard]] auto events() const -> std::span<const BadEvent> { return _events; }
    [[nodiscard]] auto event(EventId id) const -> const BadEvent & { return _events.at(id); }
    [[nodiscard]] auto prob(EventId id) const -> double { return _probs.at(id); }
    [[nodiscard]] auto max_event_size() const -> std::size_t { return _max_event_size; }

    /// Events lopsidependent with `id`, sorted ascending. Never contains `id`.
    [[nodiscard]] auto neighbors(EventId id) const -> std::span<const EventId> { return _neighbors.at(id); }
    [[nodiscard]] auto lopsidependent(EventId a, EventId b) const -> bool;

    /// Events sharing at least one variable with `id`, sorted, excluding `id`.
    [[nodiscard]] auto dependency_neighbors(EventId id) const -> std::span<const EventId>;

    /// Events containing the term (i, j).
    [[nodiscard]] auto holders(VarId i, Value j) const -> std::span<const EventId>;
    /// Events containing (i, j') for some j' != j.
    [[nodiscard]] auto disagreeing(VarId i, Value j) const -> std::span<const EventId>;
    /// Events involving variable i.
    [[nodiscard]] auto events_on(VarId i) const -> std::span<const EventId> { return _on_var.at(i); }

private:
    [[nodiscard]] auto slot(VarId i, Value j) const -> std::size_t { return _slot_offset.at(i) + j; }

    VariableSpace _space;
    std::vector<BadEvent> _events;
    std::vector<double> _probs;
    std::size_t _max_event_size = 0;
    std::vector<std::vector<EventId>> _neighbors;
    std::vector<std::vector<EventId>> _dependency;
    std::vector<std::vector<EventId>> _on_var;
    std::vector<std::size_t> _slot_offset;
    std::vector<std::vector<EventId>> _holders;
    std::vector<std::vector<EventId>> _disagreeing;
};

/// Re-checks a constructed instance: type invariants plus the fact that every
/// lopsidependent pair disagrees on a shared variable (hence is mutually exclusive).
[[nodiscard]] auto validate(const Instance & instance) -> ValidationReport;

}
