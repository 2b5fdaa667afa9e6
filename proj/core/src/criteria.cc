#include <lllmt/criteria.hh>

#include <lllmt/errors.hh>
#include <lllmt/workers.hh>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lllmt {

namespace {

constexpr std::array kinds{
    CriterionKind::symmetric_lll,
    CriterionKind::asymmetric_lll,
    CriterionKind::llll,
    CriterionKind::llll_variable,
    CriterionKind::pegden_general,
    CriterionKind::pegden_variable,
    CriterionKind::blend_closed_form,
    CriterionKind::orderable_exact,
    CriterionKind::assignable_exact,
};

// Events disagreeing with some term of the target, sorted, with their disagreement positions.
struct Candidates {
    std::vector<EventId> ids;
    std::vector<std::vector<std::uint32_t>> positions;
};

auto candidates_for(const Instance & instance, const BadEvent & target) -> Candidates
{
    auto terms = target.terms();
    std::vector<EventId> ids;
    for (auto & t : terms) {
        if (t.var >= instance.variable_count() || t.value >= instance.space().domain_size(t.var))
            throw InputError("target term (" + std::to_string(t.var) + "," + std::to_string(t.value) + ") outside the variable space");
        auto d = instance.disagreeing(t.var, t.value);
        ids.insert(ids.end(), d.begin(), d.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    Candidates out;
    out.ids = std::move(ids);
    out.positions.reserve(out.ids.size());
    for (EventId id : out.ids)
        out.positions.push_back(disagreement_positions(target, instance.event(id)));
    return out;
}

// Bipartite matching of sets to target positions (Kuhn's augmenting paths).
class Matcher {
public:
    explicit Matcher(std::size_t target_size) : _owner(target_size, none) {}

    auto matches(std::span<const std::vector<std::uint32_t> * const> sets) -> bool
    {
        std::fill(_owner.begin(), _owner.end(), none);
        for (std::size_t s = 0; s < sets.size(); ++s) {
            _seen.assign(_owner.size(), 0);
            if (! augment(sets, s))
                return false;
        }
        return true;
    }

private:
    static constexpr std::size_t none = ~std::size_t{0};

    auto augment(std::span<const std::vector<std::uint32_t> * const> sets, std::size_t s) -> bool
    {
        for (auto z : *sets[s]) {
            if (_seen[z])
                continue;
            _seen[z] = 1;
            if (_owner[z] == none || augment(sets, _owner[z])) {
                _owner[z] = s;
                return true;
            }
        }
        return false;
    }

    std::vector<std::size_t> _owner;
    std::vector<char> _seen;
};

enum class Family { orderable, assignable };

class Enumerator {
public:
    Enumerator(const Candidates & candidates, std::size_t target_size, Family family, std::size_t cap, const SetVisitor & visit) :
        _c(candidates), _target_size(target_size), _family(family), _cap(cap), _visit(visit), _matcher(target_size)
    {
    }

    void run()
    {
        emit();
        descend(0);
    }

    [[nodiscard]] auto count() const -> std::size_t { return _count; }

    void emit()
    {
        if (++_count > _cap)
            throw CapacityExceeded("subset enumeration exceeded the cap of " + std::to_string(_cap) + " sets");
        _visit(_chosen);
    }

    void emit_singleton(EventId id)
    {
        _chosen.assign(1, id);
        emit();
        _chosen.clear();
    }

private:
    void descend(std::size_t from)
    {
        for (std::size_t k = from; k < _c.ids.size(); ++k) {
            _chosen.push_back(_c.ids[k]);
            _sets.push_back(&_c.positions[k]);
            if (accepts()) {
                emit();
                descend(k + 1);
            }
            _chosen.pop_back();
            _sets.pop_back();
        }
    }

    auto accepts() -> bool
    {
        if (_family == Family::assignable)
            return _matcher.matches(_sets);
        _scratch.clear();
        for (auto * s : _sets)
            _scratch.push_back(*s);
        return orderable_positions(_scratch, _target_size);
    }

    const Candidates & _c;
    std::size_t _target_size;
    Family _family;
    std::size_t _cap;
    const SetVisitor & _visit;
    Matcher _matcher;
    std::vector<EventId> _chosen;
    std::vector<const std::vector<std::uint32_t> *> _sets;
    std::vector<std::vector<std::uint32_t>> _scratch;
    std::size_t _count = 0;
};

void enumerate(const Instance & instance, const BadEvent & target, std::optional<EventId> target_id, Family family,
    std::size_t cap, const SetVisitor & visit)
{
    auto candidates = candidates_for(instance, target);
    Enumerator e(candidates, target.size(), family, cap, visit);
    e.run();
    if (target_id) {
        // The singleton {target}: a target never disagrees with itself, so the
        // subset walk above cannot have produced it.
        e.emit_singleton(*target_id);
    }
}

auto collect(auto && producer) -> std::vector<std::vector<EventId>>
{
    std::vector<std::vector<EventId>> out;
    producer([&](std::span<const EventId> s) { out.emplace_back(s.begin(), s.end()); });
    std::sort(out.begin(), out.end());
    return out;
}

auto check_set(const Instance & instance, std::span<const EventId> set) -> bool
{
    std::vector<EventId> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    for (EventId id : sorted)
        if (id >= instance.event_count())
            throw std::out_of_range("event id " + std::to_string(id) + " out of range");
    return true;
}

auto slack(const Criterion & c) -> double { return 1.0 + c.epsilon; }

auto neighbors_of(const Instance & instance, EventId id, NeighborRelation relation) -> std::span<const EventId>
{
    return relation == NeighborRelation::lopsidependency ? instance.neighbors(id) : instance.dependency_neighbors(id);
}

auto adjacent(const Instance & instance, EventId a, EventId b, NeighborRelation relation) -> bool
{
    if (relation == NeighborRelation::lopsidependency)
        return instance.lopsidependent(a, b);
    return share_variable(instance.event(a), instance.event(b));
}

auto symmetric_constant(const Instance & instance, const Criterion & c) -> double
{
    double p = 0.0;
    std::size_t d = 0;
    for (EventId id = 0; id < instance.event_count(); ++id) {
        p = std::max(p, instance.prob(id));
        d = std::max(d, neighbors_of(instance, id, c.relation).size());
    }
    return slack(c) * std::numbers::e * p * static_cast<double>(d + 1);
}

// Closed-form right-hand sides, without the slack factor.
auto closed_form(const Instance & instance, EventId id, std::span<const double> mu, CriterionKind kind) -> double
{
    const auto & event = instance.event(id);
    double p = instance.prob(id);
    switch (kind) {
    case CriterionKind::asymmetric_lll: {
        double prod = 1.0 + mu[id];
        for (EventId other : instance.dependency_neighbors(id))
            prod *= 1.0 + mu[other];
        return p * prod;
    }
    case CriterionKind::llll: {
        double prod = 1.0;
        for (EventId other : instance.neighbors(id))
            prod *= 1.0 + mu[other];
        return p * (mu[id] + prod);
    }
    case CriterionKind::llll_variable: {
        double prod = 1.0;
        for (auto & t : event.terms())
            for (EventId other : instance.disagreeing(t.var, t.value))
                prod *= 1.0 + mu[other];
        return p * (mu[id] + prod);
    }
    case CriterionKind::pegden_variable: {
        double prod = 1.0;
        for (auto & t : event.terms()) {
            double sum = 0.0;
            for (EventId other : instance.events_on(t.var))
                sum += mu[other];
            prod *= 1.0 + sum;
        }
        return p * prod;
    }
    case CriterionKind::blend_closed_form: {
        double prod = 1.0;
        for (auto & t : event.terms()) {
            double sum = 0.0;
            for (EventId other : instance.disagreeing(t.var, t.value))
                sum += mu[other];
            prod *= 1.0 + sum;
        }
        return p * (mu[id] + prod);
    }
    default:
        return 0.0;
    }
}

auto family_kind(CriterionKind k) -> bool
{
    return k == CriterionKind::orderable_exact || k == CriterionKind::assignable_exact || k == CriterionKind::pegden_general;
}

auto family_for(const Instance & instance, EventId id, const Criterion & c) -> std::vector<std::vector<EventId>>
{
    switch (c.kind) {
    case CriterionKind::orderable_exact: return orderable_sets(instance, id, c.enumeration_cap);
    case CriterionKind::assignable_exact: return assignable_sets(instance, id, c.enumeration_cap);
    case CriterionKind::pegden_general: return independent_neighbor_sets(instance, id, c.relation, c.enumeration_cap);
    default: return {};
    }
}

auto family_rhs(const Instance & instance, EventId id, std::span<const double> mu, const Criterion & c,
    std::span<const std::vector<EventId>> family) -> double
{
    double sum = family_weight(family, mu);
    if (c.kind == CriterionKind::pegden_general)
        sum += mu[id];
    return slack(c) * instance.prob(id) * sum;
}

}

auto to_string(CriterionKind kind) -> std::string_view
{
    switch (kind) {
    case CriterionKind::symmetric_lll: return "symmetric_lll";
    case CriterionKind::asymmetric_lll: return "asymmetric_lll";
    case CriterionKind::llll: return "llll";
    case CriterionKind::llll_variable: return "llll_variable";
    case CriterionKind::pegden_general: return "pegden_general";
    case CriterionKind::pegden_variable: return "pegden_variable";
    case CriterionKind::blend_closed_form: return "blend_closed_form";
    case CriterionKind::orderable_exact: return "orderable_exact";
    case CriterionKind::assignable_exact: return "assignable_exact";
    }
    return "unknown";
}

auto parse_criterion_kind(std::string_view text) -> CriterionKind
{
    std::string norm(text);
    for (auto & ch : norm) {
        if (ch == '-')
            ch = '_';
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    for (auto k : kinds)
        if (to_string(k) == norm)
            return k;
    // Short aliases.
    if (norm == "symmetric")
        return CriterionKind::symmetric_lll;
    if (norm == "asymmetric")
        return CriterionKind::asymmetric_lll;
    if (norm == "blend")
        return CriterionKind::blend_closed_form;
    if (norm == "orderable")
        return CriterionKind::orderable_exact;
    if (norm == "assignable")
        return CriterionKind::assignable_exact;
    throw InputError("unknown criterion kind '" + std::string(text) + "'");
}

auto all_criterion_kinds() -> std::span<const CriterionKind>
{
    return kinds;
}

void validate_mu(const Instance & instance, std::span<const double> mu)
{
    if (mu.size() != instance.event_count())
        throw InputError("mu has " + std::to_string(mu.size()) + " entries for " + std::to_string(instance.event_count()) + " events");
    for (std::size_t k = 0; k < mu.size(); ++k)
        if (! std::isfinite(mu[k]) || mu[k] < 0.0)
            throw InputError("mu[" + std::to_string(k) + "] is negative or not finite");
}

auto disagreement_positions(const BadEvent & target, const BadEvent & event) -> std::vector<std::uint32_t>
{
    std::vector<std::uint32_t> out;
    auto x = target.terms(), y = event.terms();
    std::size_t p = 0, q = 0;
    while (p < x.size() && q < y.size()) {
        if (x[p].var < y[q].var)
            ++p;
        else if (y[q].var < x[p].var)
            ++q;
        else {
            if (x[p].value != y[q].value)
                out.push_back(static_cast<std::uint32_t>(p));
            ++p;
            ++q;
        }
    }
    return out;
}

// Orderability is hereditary and the last element of any valid ordering owns a
// position covered by no other member, so repeatedly peeling off any member
// that uniquely covers some position decides it without backtracking.
auto orderable_positions(std::span<const std::vector<std::uint32_t>> positions, std::size_t target_size) -> bool
{
    std::vector<std::uint32_t> count(target_size, 0);
    for (auto & z : positions) {
        if (z.empty())
            return false;
        for (auto p : z)
            ++count[p];
    }
    std::vector<char> removed(positions.size(), 0);
    std::size_t left = positions.size();
    bool progress = true;
    while (left > 0 && progress) {
        progress = false;
        for (std::size_t s = 0; s < positions.size(); ++s) {
            if (removed[s])
                continue;
            bool unique = std::any_of(positions[s].begin(), positions[s].end(), [&](auto p) { return count[p] == 1; });
            if (unique) {
                removed[s] = 1;
                --left;
                progress = true;
                for (auto p : positions[s])
                    --count[p];
            }
        }
    }
    return left == 0;
}

auto is_orderable(const Instance & instance, const BadEvent & target, std::optional<EventId> target_id,
    std::span<const EventId> set) -> bool
{
    if (! check_set(instance, set))
        return false;
    if (target_id && set.size() == 1 && set[0] == *target_id)
        return true;
    std::vector<std::vector<std::uint32_t>> positions;
    positions.reserve(set.size());
    for (EventId id : set)
        positions.push_back(disagreement_positions(target, instance.event(id)));
    return orderable_positions(positions, target.size());
}

auto is_assignable(const Instance & instance, const BadEvent & target, std::optional<EventId> target_id,
    std::span<const EventId> set) -> bool
{
    if (! check_set(instance, set))
        return false;
    if (target_id && set.size() == 1 && set[0] == *target_id)
        return true;
    std::vector<std::vector<std::uint32_t>> positions;
    std::vector<const std::vector<std::uint32_t> *> refs;
    positions.reserve(set.size());
    for (EventId id : set) {
        positions.push_back(disagreement_positions(target, instance.event(id)));
        if (positions.back().empty())
            return false;
    }
    for (auto & p : positions)
        refs.push_back(&p);
    Matcher m(target.size());
    return m.matches(refs);
}

void for_each_orderable_set(const Instance & instance, EventId target, std::size_t cap, const SetVisitor & visit)
{
    enumerate(instance, instance.event(target), target, Family::orderable, cap, visit);
}

void for_each_orderable_set(const Instance & instance, const BadEvent & external_target, std::size_t cap, const SetVisitor & visit)
{
    enumerate(instance, external_target, std::nullopt, Family::orderable, cap, visit);
}

void for_each_assignable_set(const Instance & instance, EventId target, std::size_t cap, const SetVisitor & visit)
{
    enumerate(instance, instance.event(target), target, Family::assignable, cap, visit);
}

auto orderable_sets(const Instance & instance, EventId target, std::size_t cap) -> std::vector<std::vector<EventId>>
{
    return collect([&](auto && v) { for_each_orderable_set(instance, target, cap, v); });
}

auto orderable_sets(const Instance & instance, const BadEvent & external_target, std::size_t cap) -> std::vector<std::vector<EventId>>
{
    return collect([&](auto && v) { for_each_orderable_set(instance, external_target, cap, v); });
}

auto assignable_sets(const Instance & instance, EventId target, std::size_t cap) -> std::vector<std::vector<EventId>>
{
    return collect([&](auto && v) { for_each_assignable_set(instance, target, cap, v); });
}

auto independent_neighbor_sets(const Instance & instance, EventId target, NeighborRelation relation, std::size_t cap)
    -> std::vector<std::vector<EventId>>
{
    auto nb = neighbors_of(instance, target, relation);
    std::vector<std::vector<EventId>> out;
    std::vector<EventId> chosen;
    auto emit = [&] {
        if (out.size() >= cap)
            throw CapacityExceeded("independent-set enumeration exceeded the cap of " + std::to_string(cap) + " sets");
        out.push_back(chosen);
    };
    auto descend = [&](auto & self, std::size_t from) -> void {
        for (std::size_t k = from; k < nb.size(); ++k) {
            bool ok = std::none_of(chosen.begin(), chosen.end(), [&](EventId c) { return adjacent(instance, c, nb[k], relation); });
            if (! ok)
                continue;
            chosen.push_back(nb[k]);
            emit();
            self(self, k + 1);
            chosen.pop_back();
        }
    };
    emit();
    descend(descend, 0);
    return out;
}

auto family_weight(std::span<const std::vector<EventId>> family, std::span<const double> mu) -> double
{
    double sum = 0.0;
    for (auto & set : family) {
        double prod = 1.0;
        for (EventId id : set)
            prod *= mu[id];
        sum += prod;
    }
    return sum;
}

CriterionEvaluator::CriterionEvaluator(const Instance & instance, Criterion criterion) :
    _instance(&instance),
    _criterion(criterion)
{
    if (! std::isfinite(criterion.epsilon) || criterion.epsilon < 0.0)
        throw InputError("criterion slack epsilon must be finite and nonnegative");
    if (criterion.kind == CriterionKind::symmetric_lll)
        _symmetric_rhs = symmetric_constant(instance, criterion);
    else if (family_kind(criterion.kind)) {
        _families.resize(instance.event_count());
        auto m = instance.event_count();
        parallel_for(m, [&](std::size_t id) { _families[id] = family_for(instance, static_cast<EventId>(id), criterion); },
            m >= 64 ? worker_count() : 1);
    }
}

auto CriterionEvaluator::rhs(EventId id, std::span<const double> mu) const -> double
{
    auto kind = _criterion.kind;
    if (kind == CriterionKind::symmetric_lll)
        return _symmetric_rhs;
    if (family_kind(kind))
        return family_rhs(*_instance, id, mu, _criterion, _families.at(id));
    return slack(_criterion) * closed_form(*_instance, id, mu, kind);
}

auto CriterionEvaluator::lhs(EventId id, std::span<const double> mu) const -> double
{
    return _criterion.kind == CriterionKind::symmetric_lll ? 1.0 : mu[id];
}

auto rhs(const Instance & instance, EventId id, std::span<const double> mu, const Criterion & criterion) -> double
{
    validate_mu(instance, mu);
    if (criterion.kind == CriterionKind::symmetric_lll)
        return symmetric_constant(instance, criterion);
    if (family_kind(criterion.kind)) {
        auto family = family_for(instance, id, criterion);
        return family_rhs(instance, id, mu, criterion, family);
    }
    return slack(criterion) * closed_form(instance, id, mu, criterion.kind);
}

auto check(const CriterionEvaluator & evaluator, std::span<const double> mu, double relative_tolerance) -> CriterionReport
{
    const auto & instance = evaluator.instance();
    validate_mu(instance, mu);
    CriterionReport report;
    report.criterion = evaluator.criterion();
    report.events.reserve(instance.event_count());
    for (EventId id = 0; id < instance.event_count(); ++id) {
        double l = evaluator.lhs(id, mu), r = evaluator.rhs(id, mu);
        bool ok = std::isfinite(r) && l >= r * (1.0 - relative_tolerance);
        report.events.push_back({id, mu[id], r, ok});
        report.total_weight += mu[id];
        report.satisfied = report.satisfied && ok;
    }
    return report;
}

auto check(const Instance & instance, std::span<const double> mu, const Criterion & criterion, double relative_tolerance)
    -> CriterionReport
{
    CriterionEvaluator evaluator(instance, criterion);
    return check(evaluator, mu, relative_tolerance);
}

namespace {

void apply(const CriterionEvaluator & evaluator, std::span<const double> mu, std::span<double> out)
{
    auto m = mu.size();
    parallel_for(m, [&](std::size_t id) { out[id] = evaluator.rhs(static_cast<EventId>(id), mu); }, m >= 4096 ? worker_count() : 1);
}

// A converged iterate sits on the fixed point up to rounding. Look for a
// nearby point that passes the strict check: slightly inflated copies, and one
// further application of the map to each (which cannot increase rhs beyond
// the inflated point when the inflated point itself is feasible from above).
auto certify(const CriterionEvaluator & evaluator, const MuVector & mu) -> std::optional<MuVector>
{
    if (check(evaluator, mu).satisfied)
        return mu;
    MuVector trial(mu.size()), next(mu.size());
    for (double delta : {1e-12, 1e-10, 1e-8, 1e-6, 1e-4}) {
        for (std::size_t k = 0; k < mu.size(); ++k)
            trial[k] = mu[k] * (1.0 + delta) + delta * evaluator.instance().prob(static_cast<EventId>(k));
        if (check(evaluator, trial).satisfied)
            return trial;
        apply(evaluator, trial, next);
        if (std::all_of(next.begin(), next.end(), [](double x) { return std::isfinite(x); }) && check(evaluator, next).satisfied)
            return next;
    }
    return std::nullopt;
}

}

auto find_mu_fixed_point(const CriterionEvaluator & evaluator, const FixedPointOptions & options) -> MuSearchResult
{
    const auto & instance = evaluator.instance();
    const auto & c = evaluator.criterion();
    auto m = instance.event_count();
    MuSearchResult result;
    result.mu.resize(m);
    for (EventId id = 0; id < m; ++id)
        result.mu[id] = slack(c) * instance.prob(id);

    if (c.kind == CriterionKind::symmetric_lll) {
        result.found = check(evaluator, result.mu).satisfied;
        result.reason = result.found ? "symmetric criterion holds" : "symmetric criterion e p (d + 1) <= 1 fails";
        return result;
    }

    enum class Outcome { converged, diverged, exhausted };
    // Jacobi iteration of scale * F from result.mu.
    auto iterate = [&](double scale) {
        MuVector next(m);
        for (std::size_t iter = 1; iter <= options.max_iters; ++iter) {
            apply(evaluator, result.mu, next);
            double change = 0.0;
            bool diverged = false;
            for (std::size_t k = 0; k < m; ++k) {
                next[k] *= scale;
                if (! std::isfinite(next[k]) || next[k] > options.divergence_cap)
                    diverged = true;
                change = std::max(change, std::abs(next[k] - result.mu[k]));
            }
            result.mu.swap(next);
            ++result.iterations;
            if (diverged)
                return Outcome::diverged;
            if (change < options.convergence_tolerance)
                return Outcome::converged;
        }
        return Outcome::exhausted;
    };

    switch (iterate(1.0)) {
    case Outcome::diverged:
        result.reason = "iterates exceeded the divergence cap";
        return result;
    case Outcome::exhausted:
        result.reason = "no convergence within the iteration limit";
        return result;
    case Outcome::converged:
        break;
    }
    if (auto certified = certify(evaluator, result.mu)) {
        result.mu = std::move(*certified);
        result.found = true;
        result.reason = "converged";
        return result;
    }
    // A stable fixed point can sit on the boundary in a direction the uniform
    // inflation misses; the fixed point of (1 + eta) F is strictly feasible.
    auto base = result.mu;
    for (double eta : {1e-10, 1e-8, 1e-6}) {
        result.mu = base;
        if (iterate(1.0 + eta) == Outcome::converged && check(evaluator, result.mu).satisfied) {
            result.found = true;
            result.reason = "converged";
            return result;
        }
    }
    result.mu = std::move(base);
    result.reason = "converged, but no nearby point passes the strict check";
    return result;
}

auto find_mu_fixed_point(const Instance & instance, const Criterion & criterion, const FixedPointOptions & options) -> MuSearchResult
{
    CriterionEvaluator evaluator(instance, criterion);
    return find_mu_fixed_point(evaluator, options);
}

}
