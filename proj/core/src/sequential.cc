#include <lllmt/sequential.hh>

#include <lllmt/errors.hh>
#include <lllmt/workers.hh>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

namespace lllmt {

void TrueEventSet::insert(EventId id)
{
    auto & w = _words.at(id / 64);
    std::uint64_t bit = std::uint64_t{1} << (id % 64);
    if (! (w & bit)) {
        w |= bit;
        ++_size;
    }
}

void TrueEventSet::erase(EventId id)
{
    auto & w = _words.at(id / 64);
    std::uint64_t bit = std::uint64_t{1} << (id % 64);
    if (w & bit) {
        w &= ~bit;
        --_size;
    }
}

auto TrueEventSet::lowest() const -> std::optional<EventId>
{
    for (std::size_t k = 0; k < _words.size(); ++k)
        if (_words[k])
            return static_cast<EventId>(k * 64 + std::countr_zero(_words[k]));
    return std::nullopt;
}

auto TrueEventSet::nth(std::size_t k) const -> EventId
{
    for (std::size_t w = 0; w < _words.size(); ++w) {
        auto word = _words[w];
        auto c = static_cast<std::size_t>(std::popcount(word));
        if (k >= c) {
            k -= c;
            continue;
        }
        while (k-- > 0)
            word &= word - 1;
        return static_cast<EventId>(w * 64 + std::countr_zero(word));
    }
    throw std::out_of_range("TrueEventSet::nth past the end");
}

auto TrueEventSet::to_vector() const -> std::vector<EventId>
{
    std::vector<EventId> out;
    out.reserve(_size);
    for (std::size_t w = 0; w < _words.size(); ++w)
        for (auto word = _words[w]; word; word &= word - 1)
            out.push_back(static_cast<EventId>(w * 64 + std::countr_zero(word)));
    return out;
}

auto lowest_id_rule() -> ResampleRule
{
    return [](const RuleContext & ctx) { return *ctx.true_events.lowest(); };
}

auto random_rule() -> ResampleRule
{
    return [](const RuleContext & ctx) {
        Stream s(ctx.seed, Purpose::rule, ctx.step);
        return ctx.true_events.nth(s.below(ctx.true_events.size()));
    };
}

TruthTracker::TruthTracker(const Instance & instance, Assignment initial) :
    _instance(&instance),
    _assignment(std::move(initial)),
    _satisfied(instance.event_count(), 0),
    _true(instance.event_count())
{
    if (_assignment.size() != instance.variable_count())
        throw std::invalid_argument("TruthTracker: assignment size does not match the variable count");
    for (EventId id = 0; id < instance.event_count(); ++id) {
        for (auto & t : instance.event(id).terms())
            if (_assignment[t.var] == t.value)
                ++_satisfied[id];
        if (_satisfied[id] == instance.event(id).size())
            _true.insert(id);
    }
}

void TruthTracker::set(VarId i, Value j)
{
    Value old = _assignment.at(i);
    if (old == j)
        return;
    for (EventId id : _instance->holders(i, old)) {
        if (_satisfied[id] == _instance->event(id).size())
            _true.erase(id);
        --_satisfied[id];
    }
    _assignment[i] = j;
    for (EventId id : _instance->holders(i, j))
        if (++_satisfied[id] == _instance->event(id).size())
            _true.insert(id);
}

auto ExecutionLog::state_before(std::size_t t) const -> Assignment
{
    if (t < 1 || t > steps.size() + 1)
        throw std::out_of_range("state_before: step " + std::to_string(t) + " outside 1.."
            + std::to_string(steps.size() + 1));
    Assignment a = initial;
    for (std::size_t k = 0; k + 1 < t; ++k)
        for (auto & term : steps[k].values)
            a.at(term.var) = term.value;
    return a;
}

auto check_log(const Instance & instance, const ExecutionLog & log) -> std::optional<std::string>
{
    auto & space = instance.space();
    if (log.initial.size() != instance.variable_count())
        return "initial assignment has the wrong length";
    for (VarId i = 0; i < log.initial.size(); ++i)
        if (log.initial[i] >= space.domain_size(i))
            return "initial value of variable " + std::to_string(i) + " outside its domain";
    Assignment a = log.initial;
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
        auto & step = log.steps[k];
        auto where = "step " + std::to_string(k + 1) + ": ";
        if (step.t != k + 1)
            return where + "step number " + std::to_string(step.t) + " out of sequence";
        if (step.event >= instance.event_count())
            return where + "unknown event " + std::to_string(step.event);
        auto & e = instance.event(step.event);
        if (! is_true(e, a))
            return where + "event " + std::to_string(step.event) + " was not true";
        if (step.values.size() != e.size())
            return where + "wrong number of resampled values";
        for (std::size_t q = 0; q < e.size(); ++q) {
            auto & term = step.values[q];
            if (term.var != e.terms()[q].var)
                return where + "resampled variable " + std::to_string(term.var) + " is not in the event";
            if (term.value >= space.domain_size(term.var))
                return where + "value outside the domain of variable " + std::to_string(term.var);
            a[term.var] = term.value;
        }
    }
    return std::nullopt;
}

auto draw_initial(const VariableSpace & space, std::uint64_t seed) -> Assignment
{
    Assignment a(space.size());
    for (VarId i = 0; i < space.size(); ++i)
        a[i] = Stream(seed, Purpose::initial, i).categorical(space.probs(i));
    return a;
}

auto true_events(const Instance & instance, std::span<const Value> assignment) -> std::vector<EventId>
{
    std::vector<EventId> out;
    for (EventId id = 0; id < instance.event_count(); ++id)
        if (is_true(instance.event(id), assignment))
            out.push_back(id);
    return out;
}

auto run(const Instance & instance, std::uint64_t seed, const RunOptions & options, const ResampleRule & rule) -> RunResult
{
    auto start = std::chrono::steady_clock::now();
    auto & space = instance.space();
    RunResult result;
    TruthTracker tracker(instance, draw_initial(space, seed));
    if (options.record_log)
        result.log.initial = tracker.assignment();
    result.stats.resample_counts.assign(instance.event_count(), 0);

    std::size_t t = 1;
    while (! tracker.true_events().empty()) {
        if (t > options.max_steps)
            break;
        EventId chosen = rule(RuleContext{instance, tracker.assignment(), tracker.true_events(), t, seed});
        if (chosen >= instance.event_count() || ! tracker.is_true(chosen))
            throw ContractViolation("resampling rule chose event " + std::to_string(chosen) + " at step "
                + std::to_string(t) + ", which is not a true bad-event");
        LogStep step{t, chosen, {}};
        for (auto & term : instance.event(chosen).terms()) {
            Value v = Stream(seed, Purpose::resample, t, term.var).categorical(space.probs(term.var));
            tracker.set(term.var, v);
            if (options.record_log)
                step.values.push_back({term.var, v});
        }
        if (options.record_log)
            result.log.steps.push_back(std::move(step));
        ++result.stats.resample_counts[chosen];
        ++t;
    }
    result.stats.steps = t - 1;
    result.stats.terminated = tracker.true_events().empty();
    result.assignment = tracker.assignment();
    result.stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

auto run_batch(const Instance & instance, std::uint64_t seed, std::size_t runs, const RunOptions & options, const ResampleRule & rule)
    -> BatchStats
{
    auto m = instance.event_count();
    std::vector<RunStats> all(runs);
    RunOptions quiet = options;
    quiet.record_log = false;
    parallel_for(runs, [&](std::size_t r) { all[r] = run(instance, batch_seed(seed, r), quiet, rule).stats; });

    BatchStats out;
    out.runs = runs;
    out.mean_resamples.assign(m, 0.0);
    out.sd_resamples.assign(m, 0.0);
    if (runs == 0)
        return out;
    for (auto & s : all) {
        out.terminated += s.terminated ? 1 : 0;
        out.mean_steps += static_cast<double>(s.steps);
        for (std::size_t b = 0; b < m; ++b)
            out.mean_resamples[b] += static_cast<double>(s.resample_counts[b]);
    }
    double n = static_cast<double>(runs);
    out.mean_steps /= n;
    for (auto & x : out.mean_resamples)
        x /= n;
    if (runs > 1) {
        for (auto & s : all)
            for (std::size_t b = 0; b < m; ++b) {
                double d = static_cast<double>(s.resample_counts[b]) - out.mean_resamples[b];
                out.sd_resamples[b] += d * d;
            }
        for (auto & x : out.sd_resamples)
            x = std::sqrt(x / (n - 1.0));
    }
    return out;
}

auto estimate_event_probability(const Instance & instance, std::span<const double> mu, const BadEvent & target,
    std::size_t runs, std::uint64_t seed, const RunOptions & options) -> DistributionEstimate
{
    validate_mu(instance, mu);
    if (target.empty())
        throw InputError("target event is empty");
    for (auto & e : instance.events())
        if (e == target)
            throw InputError("target event is one of the bad-events; its terminal probability is zero by definition");

    DistributionEstimate out;
    out.runs = runs;
    double sum = 0.0;
    for_each_orderable_set(instance, target, default_enumeration_cap, [&](std::span<const EventId> set) {
        double prod = 1.0;
        for (EventId id : set)
            prod *= mu[id];
        sum += prod;
    });
    out.bound = event_prob(target, instance.space()) * sum;

    std::vector<char> hit(runs, 0), done(runs, 0);
    RunOptions quiet = options;
    quiet.record_log = false;
    parallel_for(runs, [&](std::size_t r) {
        auto res = run(instance, batch_seed(seed, r), quiet);
        done[r] = res.stats.terminated;
        hit[r] = res.stats.terminated && is_true(target, res.assignment);
    });
    for (std::size_t r = 0; r < runs; ++r) {
        out.hits += hit[r] ? 1 : 0;
        out.nonterminated += done[r] ? 0 : 1;
    }
    out.frequency = runs ? static_cast<double>(out.hits) / static_cast<double>(runs) : 0.0;
    return out;
}

}
