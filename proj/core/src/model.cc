#include <lllmt/model.hh>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lllmt {

VariableSpace::VariableSpace(std::vector<std::vector<double>> probs) :
    _probs(std::move(probs))
{
}

auto VariableSpace::uniform(std::size_t n, std::size_t domain) -> VariableSpace
{
    return VariableSpace(std::vector<std::vector<double>>(n, std::vector<double>(domain, 1.0 / static_cast<double>(domain))));
}

auto VariableSpace::max_domain_size() const -> std::size_t
{
    std::size_t result = 0;
    for (auto & p : _probs)
        result = std::max(result, p.size());
    return result;
}

BadEvent::BadEvent(std::vector<Term> terms) :
    _terms(std::move(terms))
{
    std::sort(_terms.begin(), _terms.end());
}

auto BadEvent::demand(VarId i) const -> std::optional<Value>
{
    auto it = std::lower_bound(_terms.begin(), _terms.end(), Term{i, 0});
    if (it != _terms.end() && it->var == i)
        return it->value;
    return std::nullopt;
}

auto is_true(const BadEvent & event, std::span<const Value> assignment) -> bool
{
    for (auto & t : event.terms()) {
        if (t.var >= assignment.size())
            throw std::out_of_range("is_true: event names variable " + std::to_string(t.var)
                + " but the assignment has " + std::to_string(assignment.size()));
        if (assignment[t.var] != t.value)
            return false;
    }
    return true;
}

auto lopsidependent(const BadEvent & a, const BadEvent & b) -> bool
{
    auto x = a.terms(), y = b.terms();
    std::size_t p = 0, q = 0;
    while (p < x.size() && q < y.size()) {
        if (x[p].var < y[q].var)
            ++p;
        else if (y[q].var < x[p].var)
            ++q;
        else {
            if (x[p].value != y[q].value)
                return true;
            ++p;
            ++q;
        }
    }
    return false;
}

auto share_variable(const BadEvent & a, const BadEvent & b) -> bool
{
    auto x = a.terms(), y = b.terms();
    std::size_t p = 0, q = 0;
    while (p < x.size() && q < y.size()) {
        if (x[p].var < y[q].var)
            ++p;
        else if (y[q].var < x[p].var)
            ++q;
        else
            return true;
    }
    return false;
}

auto event_prob(const BadEvent & event, const VariableSpace & space) -> double
{
    double p = 1.0;
    for (auto & t : event.terms())
        p *= space.prob(t.var, t.value);
    return p;
}

auto ValidationReport::summary() const -> std::string
{
    if (issues.empty())
        return "ok";
    std::ostringstream out;
    bool first = true;
    for (auto & issue : issues) {
        if (! first)
            out << "; ";
        first = false;
        if (issue.event)
            out << "event " << *issue.event << ": ";
        else if (issue.var)
            out << "variable " << *issue.var << ": ";
        out << issue.message;
    }
    return out.str();
}

auto validate(const VariableSpace & space, std::span<const BadEvent> events) -> ValidationReport
{
    ValidationReport report;
    for (VarId i = 0; i < space.size(); ++i) {
        auto probs = space.probs(i);
        if (probs.empty()) {
            report.issues.push_back({std::nullopt, i, "empty domain"});
            continue;
        }
        double sum = 0.0;
        bool bad_entry = false;
        for (double p : probs) {
            if (! std::isfinite(p) || p < 0.0)
                bad_entry = true;
            sum += p;
        }
        if (bad_entry)
            report.issues.push_back({std::nullopt, i, "probability is negative or not finite"});
        else if (std::abs(sum - 1.0) > normalization_tolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "probabilities sum to " << sum << ", not 1";
            report.issues.push_back({std::nullopt, i, msg.str()});
        }
    }

    for (EventId id = 0; id < events.size(); ++id) {
        auto terms = events[id].terms();
        if (terms.empty()) {
            report.issues.push_back({id, std::nullopt, "empty event"});
            continue;
        }
        for (std::size_t k = 0; k < terms.size(); ++k) {
            auto & t = terms[k];
            if (t.var >= space.size()) {
                report.issues.push_back({id, t.var, "variable out of range"});
                continue;
            }
            if (t.value >= space.domain_size(t.var))
                report.issues.push_back({id, t.var, "value " + std::to_string(t.value) + " outside the domain"});
            if (k > 0 && terms[k - 1].var == t.var) {
                if (terms[k - 1].value != t.value)
                    report.issues.push_back({id, t.var, "contradictory atomic event: two values demanded for one variable"});
                else
                    report.issues.push_back({id, t.var, "duplicate term"});
            }
        }
    }
    return report;
}

InvalidInstance::InvalidInstance(ValidationReport report) :
    _report(std::move(report)),
    _message("invalid instance: " + _report.summary())
{
}

Instance::Instance(VariableSpace space, std::vector<BadEvent> events) :
    _space(std::move(space)),
    _events(std::move(events))
{
    auto report = validate(_space, _events);
    if (! report.ok())
        throw InvalidInstance(std::move(report));

    std::size_t n = _space.size(), m = _events.size();
    _slot_offset.resize(n + 1, 0);
    for (VarId i = 0; i < n; ++i)
        _slot_offset[i + 1] = _slot_offset[i] + _space.domain_size(i);
    _holders.assign(_slot_offset[n], {});
    _disagreeing.assign(_slot_offset[n], {});
    _on_var.assign(n, {});

    _probs.resize(m);
    for (EventId id = 0; id < m; ++id) {
        auto & e = _events[id];
        _probs[id] = event_prob(e, _space);
        _max_event_size = std::max(_max_event_size, e.size());
        for (auto & t : e.terms()) {
            _holders[slot(t.var, t.value)].push_back(id);
            _on_var[t.var].push_back(id);
        }
    }

    for (VarId i = 0; i < n; ++i)
        for (Value j = 0; j < _space.domain_size(i); ++j) {
            auto & out = _disagreeing[slot(i, j)];
            for (Value k = 0; k < _space.domain_size(i); ++k)
                if (k != j)
                    out.insert(out.end(), _holders[slot(i, k)].begin(), _holders[slot(i, k)].end());
            std::sort(out.begin(), out.end());
        }

    _neighbors.assign(m, {});
    _dependency.assign(m, {});
    for (EventId id = 0; id < m; ++id) {
        auto & nb = _neighbors[id];
        auto & dep = _dependency[id];
        for (auto & t : _events[id].terms()) {
            auto d = disagreeing(t.var, t.value);
            nb.insert(nb.end(), d.begin(), d.end());
            auto & on = _on_var[t.var];
            dep.insert(dep.end(), on.begin(), on.end());
        }
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        std::sort(dep.begin(), dep.end());
        dep.erase(std::unique(dep.begin(), dep.end()), dep.end());
        dep.erase(std::remove(dep.begin(), dep.end(), id), dep.end());
    }

    // Lopsidependent events must be mutually exclusive: they must disagree on a shared variable.
    for (EventId id = 0; id < m; ++id)
        for (EventId other : _neighbors[id])
            if (other == id || ! ::lllmt::lopsidependent(_events[id], _events[other]))
                throw std::logic_error("lopsidependency index inconsistent for events "
                    + std::to_string(id) + " and " + std::to_string(other));
}

auto Instance::lopsidependent(EventId a, EventId b) const -> bool
{
    auto & nb = _neighbors.at(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

auto Instance::dependency_neighbors(EventId id) const -> std::span<const EventId>
{
    return _dependency.at(id);
}

auto Instance::holders(VarId i, Value j) const -> std::span<const EventId>
{
    if (i >= _space.size() || j >= _space.domain_size(i))
        throw std::out_of_range("holders: term out of range");
    return _holders[slot(i, j)];
}

auto Instance::disagreeing(VarId i, Value j) const -> std::span<const EventId>
{
    if (i >= _space.size() || j >= _space.domain_size(i))
        throw std::out_of_range("disagreeing: term out of range");
    return _disagreeing[slot(i, j)];
}

auto validate(const Instance & instance) -> ValidationReport
{
    auto report = validate(instance.space(), instance.events());
    for (EventId id = 0; id < instance.event_count(); ++id)
        for (EventId other : instance.neighbors(id))
            if (! lopsidependent(instance.event(id), instance.event(other)))
                report.issues.push_back({id, std::nullopt,
                    "listed as lopsidependent with event " + std::to_string(other) + " but they do not disagree"});
    return report;
}

}
