#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/model.hh>
#include <lllmt/random.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lllmt {

/// Bitset of currently-true events with ordered access.
class TrueEventSet {
public:
    explicit TrueEventSet(std::size_t m = 0) : _words((m + 63) / 64, 0), _capacity(m) {}

    void insert(EventId id);
    void erase(EventId id);
    [[nodiscard]] auto contains(EventId id) const -> bool { return id < _capacity && (_words[id / 64] >> (id % 64) & 1); }
    [[nodiscard]] auto size() const -> std::size_t { return _size; }
    [[nodiscard]] auto empty() const -> bool { return _size == 0; }
    [[nodiscard]] auto lowest() const -> std::optional<EventId>;
    /// k-th smallest member, k < size().
    [[nodiscard]] auto nth(std::size_t k) const -> EventId;
    [[nodiscard]] auto to_vector() const -> std::vector<EventId>;

private:
    std::vector<std::uint64_t> _words;
    std::size_t _capacity;
    std::size_t _size = 0;
};

/// Assignment plus the set of true events, kept current under single-variable
/// updates through the (variable, value) occurrence index.
class TruthTracker {
public:
    TruthTracker(const Instance & instance, Assignment initial);

    void set(VarId i, Value j);
    [[nodiscard]] auto assignment() const -> const Assignment & { return _assignment; }
    [[nodiscard]] auto true_events() const -> const TrueEventSet & { return _true; }
    [[nodiscard]] auto is_true(EventId id) const -> bool { return _true.contains(id); }

private:
    const Instance * _instance;
    Assignment _assignment;
    std::vector<std::uint32_t> _satisfied;
    TrueEventSet _true;
};

/// What a selection rule may look at: only the present state and the step counter.
struct RuleContext {
    const Instance & instance;
    std::span<const Value> assignment;
    const TrueEventSet & true_events;
    std::size_t step;
    std::uint64_t seed;
};

using ResampleRule = std::function<EventId(const RuleContext &)>;

auto lowest_id_rule() -> ResampleRule;
/// Uniform choice among true events, drawn from the rule stream keyed by the step.
auto random_rule() -> ResampleRule;

struct LogStep {
    std::size_t t;             ///< 1-based step number
    EventId event;
    std::vector<Term> values;  ///< new (variable, value) for each variable of the event, in variable order
};

struct ExecutionLog {
    Assignment initial;
    std::vector<LogStep> steps;

    [[nodiscard]] auto size() const -> std::size_t { return steps.size(); }
    /// Assignment just before step t (t in 1..size()+1; size()+1 gives the final state).
    [[nodiscard]] auto state_before(std::size_t t) const -> Assignment;
    [[nodiscard]] auto replay() const -> Assignment { return state_before(steps.size() + 1); }
};

/// Checks that every logged event was true before its step, that step numbers
/// run 1..T, and that values fit the domains. Returns the first problem found.
[[nodiscard]] auto check_log(const Instance & instance, const ExecutionLog & log) -> std::optional<std::string>;

struct RunStats {
    std::size_t steps = 0;
    std::vector<std::size_t> resample_counts;
    bool terminated = false;
    double wall_seconds = 0.0;
};

inline constexpr std::size_t default_max_steps = 1'000'000;

struct RunOptions {
    std::size_t max_steps = default_max_steps;
    bool record_log = true;
};

/// terminated == false in stats signals non-termination; the log is kept for inspection.
struct RunResult {
    Assignment assignment;
    ExecutionLog log;
    RunStats stats;
};

/// Draws X_i from the initial substream of each variable.
[[nodiscard]] auto draw_initial(const VariableSpace & space, std::uint64_t seed) -> Assignment;

/// Events true under the assignment.
[[nodiscard]] auto true_events(const Instance & instance, std::span<const Value> assignment) -> std::vector<EventId>;

/// Sequential resampling. Throws ContractViolation if the rule picks an event that is not true.
[[nodiscard]] auto run(const Instance & instance, std::uint64_t seed, const RunOptions & options = {},
    const ResampleRule & rule = lowest_id_rule()) -> RunResult;

struct BatchStats {
    std::size_t runs = 0;
    std::size_t terminated = 0;
    std::vector<double> mean_resamples;
    std::vector<double> sd_resamples;
    double mean_steps = 0.0;
};

/// Independent runs seeded by batch_seed(seed, r); executed concurrently.
[[nodiscard]] auto run_batch(const Instance & instance, std::uint64_t seed, std::size_t runs, const RunOptions & options = {},
    const ResampleRule & rule = lowest_id_rule()) -> BatchStats;

struct DistributionEstimate {
    std::size_t runs = 0;
    std::size_t hits = 0;       ///< runs whose terminal state satisfies the target
    double frequency = 0.0;
    double bound = 0.0;         ///< P(E) times the orderable-set sum for E
    std::size_t nonterminated = 0;
};

/// Empirical frequency of an atomic target event at termination, against its
/// bound. The target must not itself be a bad-event (InputError otherwise).
[[nodiscard]] auto estimate_event_probability(const Instance & instance, std::span<const double> mu, const BadEvent & target,
    std::size_t runs, std::uint64_t seed, const RunOptions & options = {}) -> DistributionEstimate;

}
