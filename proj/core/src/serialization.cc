#include <lllmt/serialization.hh>

#include <lllmt/errors.hh>

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace lllmt {

using nlohmann::json;

namespace {

auto number(double x) -> json
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

auto real(const json & j) -> double
{
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

auto relation_name(NeighborRelation r) -> const char *
{
    return r == NeighborRelation::dependency ? "dependency" : "lopsidependency";
}

}

auto to_json(const Criterion & c) -> json
{
    return {{"kind", std::string(to_string(c.kind))}, {"epsilon", c.epsilon}, {"relation", relation_name(c.relation)},
        {"enumeration_cap", c.enumeration_cap}};
}

auto criterion_from_json(const json & j) -> Criterion
{
    try {
        Criterion c;
        c.kind = parse_criterion_kind(j.at("kind").get<std::string>());
        c.epsilon = j.value("epsilon", 0.0);
        auto rel = j.value("relation", std::string("lopsidependency"));
        if (rel == "dependency")
            c.relation = NeighborRelation::dependency;
        else if (rel != "lopsidependency")
            throw InputError("unknown relation '" + rel + "'");
        c.enumeration_cap = j.value("enumeration_cap", default_enumeration_cap);
        return c;
    }
    catch (const json::exception & e) {
        throw InputError(std::string("criterion: ") + e.what());
    }
}

auto to_json(const CriterionReport & r) -> json
{
    json j = to_json(r.criterion);
    j["W"] = number(r.total_weight);
    j["satisfied"] = r.satisfied;
    json events = json::array();
    for (auto & e : r.events)
        events.push_back({{"id", e.id}, {"mu", number(e.mu)}, {"rhs", number(e.rhs)}, {"ok", e.ok}});
    j["events"] = std::move(events);
    return j;
}

auto report_from_json(const json & j) -> CriterionReport
{
    try {
        CriterionReport r;
        r.criterion = criterion_from_json(j);
        r.total_weight = real(j.at("W"));
        r.satisfied = j.at("satisfied").get<bool>();
        for (auto & e : j.at("events"))
            r.events.push_back({e.at("id").get<EventId>(), real(e.at("mu")), real(e.at("rhs")), e.at("ok").get<bool>()});
        return r;
    }
    catch (const json::exception & e) {
        throw InputError(std::string("criterion report: ") + e.what());
    }
}

auto to_json(const MuSearchResult & r) -> json
{
    json mu = json::array();
    for (double x : r.mu)
        mu.push_back(number(x));
    return {{"found", r.found}, {"iterations", r.iterations}, {"reason", r.reason}, {"mu", std::move(mu)}};
}

auto to_json(const RunStats & s) -> json
{
    return {{"steps", s.steps}, {"terminated", s.terminated}, {"resample_counts", s.resample_counts}, {"wall_seconds", s.wall_seconds}};
}

auto to_json(const BatchStats & s) -> json
{
    return {{"runs", s.runs}, {"terminated", s.terminated}, {"mean_steps", s.mean_steps}, {"mean_resamples", s.mean_resamples},
        {"sd_resamples", s.sd_resamples}};
}

auto to_json(const DistributionEstimate & e) -> json
{
    return {{"runs", e.runs}, {"hits", e.hits}, {"frequency", e.frequency}, {"bound", number(e.bound)}, {"nonterminated", e.nonterminated}};
}

auto to_json(const SubRoundRecord & r) -> json
{
    json j{{"t", r.t}, {"s", r.s}, {"v", r.v_size}, {"i", r.i_size}, {"i_prime", r.i_prime_size}, {"switched", r.switched},
        {"longest_path", r.longest_path}};
    if (r.state)
        j["state"] = *r.state;
    return j;
}

auto to_json(const ParallelResult & r) -> json
{
    return {{"rounds", r.rounds}, {"terminated", r.terminated}, {"subrounds", r.trace.size()}, {"resamplings", r.log.size()},
        {"psi", r.psi}, {"warnings", r.warnings}, {"assignment", r.assignment}};
}

auto to_json(const VcmepResult & r) -> json
{
    json trace = json::array();
    for (auto & round : r.trace) {
        json j{{"round", round.round}, {"residual_edges", round.residual_edges}, {"fractional_value", round.fractional_value},
            {"selected", round.selected}, {"deselected", round.deselected}, {"packing_size", round.packing_size}};
        if (round.phi)
            j["phi"] = *round.phi;
        trace.push_back(std::move(j));
    }
    json j{{"edges", r.packing.edges}, {"load", r.packing.load}, {"terminated", r.terminated}, {"trace", std::move(trace)}};
    if (r.final_phi)
        j["final_phi"] = *r.final_phi;
    return j;
}

void write_log_jsonl(std::ostream & out, const ExecutionLog & log)
{
    out << json{{"initial", log.initial}}.dump() << '\n';
    for (auto & step : log.steps) {
        json values = json::array();
        for (auto & term : step.values)
            values.push_back({term.var, term.value});
        out << json{{"t", step.t}, {"event", step.event}, {"values", std::move(values)}}.dump() << '\n';
    }
}

auto read_log_jsonl(std::istream & in) -> ExecutionLog
{
    ExecutionLog log;
    std::string raw;
    std::size_t line = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            auto j = json::parse(raw);
            if (! header) {
                log.initial = j.at("initial").get<Assignment>();
                header = true;
                continue;
            }
            LogStep step{j.at("t").get<std::size_t>(), j.at("event").get<EventId>(), {}};
            for (auto & v : j.at("values"))
                step.values.push_back({v.at(0).get<VarId>(), v.at(1).get<Value>()});
            log.steps.push_back(std::move(step));
        }
        catch (const json::exception & e) {
            throw InputError(line, e.what());
        }
    }
    if (! header)
        throw InputError("log has no initial assignment line");
    return log;
}

void write_trace_jsonl(std::ostream & out, const std::vector<SubRoundRecord> & trace)
{
    for (auto & r : trace)
        out << to_json(r).dump() << '\n';
}

}
