#include <lllmt/parallel.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>
#include <lllmt/workers.hh>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace lllmt {

auto capacity(double q, std::size_t max_event_size, std::size_t event_count) -> std::uint32_t
{
    auto cap = static_cast<std::uint32_t>(std::max<std::size_t>(1, event_count));
    if (q <= 0.0 || max_event_size == 0)
        return cap;
    // The small offset keeps exact integers such as 1/(3 * 1/3) from rounding up.
    double c = std::ceil(1.0 / (static_cast<double>(max_event_size) * q) - 1e-9);
    if (c < 1.0)
        c = 1.0;
    if (c >= static_cast<double>(cap))
        return cap;
    return static_cast<std::uint32_t>(c);
}

auto build_conflict_graph(const Instance & instance, std::span<const EventId> selected, std::span<const double> rho,
    const std::vector<std::vector<Value>> & proposals, std::span<const Value> a) -> ConflictGraph
{
    std::vector<std::size_t> order(selected.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto l, auto r) {
        return std::tie(rho[l], selected[l]) < std::tie(rho[r], selected[r]);
    });

    ConflictGraph g;
    g.vertices.reserve(selected.size());
    for (auto k : order)
        g.vertices.push_back(selected[k]);
    g.out.assign(selected.size(), {});

    // (variable, position, proposal differs from a) for every term of every vertex
    std::vector<std::tuple<VarId, std::size_t, bool>> occ;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        auto terms = instance.event(selected[order[pos]]).terms();
        auto & x = proposals[order[pos]];
        for (std::size_t q = 0; q < terms.size(); ++q)
            occ.emplace_back(terms[q].var, pos, x[q] != a[terms[q].var]);
    }
    std::sort(occ.begin(), occ.end());
    for (std::size_t lo = 0; lo < occ.size();) {
        auto hi = lo;
        while (hi < occ.size() && std::get<0>(occ[hi]) == std::get<0>(occ[lo]))
            ++hi;
        for (auto p = lo; p < hi; ++p)
            if (std::get<2>(occ[p]))
                for (auto q = p + 1; q < hi; ++q)
                    g.out[std::get<1>(occ[p])].push_back(std::get<1>(occ[q]));
        lo = hi;
    }
    for (auto & o : g.out) {
        std::sort(o.begin(), o.end());
        o.erase(std::unique(o.begin(), o.end()), o.end());
    }
    return g;
}

auto lfmis_greedy(const ConflictGraph & g) -> LfmisResult
{
    auto n = g.vertices.size();
    std::vector<std::size_t> indeg(n, 0);
    for (auto & o : g.out)
        for (auto w : o)
            ++indeg[w];
    std::vector<char> alive(n, 1), member(n, 0);
    std::size_t left = n;
    LfmisResult result;

    auto remove = [&](std::size_t v) {
        alive[v] = 0;
        --left;
        for (auto w : g.out[v])
            --indeg[w];
    };
    while (left > 0) {
        ++result.iterations;
        std::vector<std::size_t> sources;
        for (std::size_t v = 0; v < n; ++v)
            if (alive[v] && indeg[v] == 0)
                sources.push_back(v);
        std::vector<std::size_t> doomed;
        for (auto v : sources) {
            member[v] = 1;
            for (auto w : g.out[v])
                if (alive[w])
                    doomed.push_back(w);
        }
        for (auto v : sources)
            remove(v);
        std::sort(doomed.begin(), doomed.end());
        doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
        for (auto v : doomed)
            if (alive[v])
                remove(v);
    }
    for (std::size_t v = 0; v < n; ++v)
        if (member[v])
            result.members.push_back(g.vertices[v]);
    return result;
}

auto psi_margin(const VariableSpace & space) -> double
{
    double top = 0.0;
    for (VarId i = 0; i < space.size(); ++i)
        for (double p : space.probs(i))
            top = std::max(top, p);
    return 1.0 - top;
}

namespace {

enum class Mode { full, hybrid };

auto draw(const VariableSpace & space, std::uint64_t seed, std::size_t t, std::size_t s, EventId b, VarId i) -> Value
{
    return Stream(seed, Purpose::proposal, t, s, b, i).categorical(space.probs(i));
}

auto select_packing(const Instance & instance, const std::vector<EventId> & v, const std::vector<std::uint32_t> & caps,
    const ParallelOptions & options, std::uint64_t seed, std::size_t t, std::size_t s) -> std::vector<EventId>
{
    CapacitatedHypergraph g;
    g.vertex_count = instance.variable_count();
    g.capacity.resize(g.vertex_count);
    auto edges = static_cast<std::uint32_t>(v.size());
    for (VarId i = 0; i < g.vertex_count; ++i)
        g.capacity[i] = std::min(caps[i], edges);
    g.edges.reserve(v.size());
    for (EventId b : v) {
        std::vector<std::uint32_t> e;
        for (auto & term : instance.event(b).terms())
            e.push_back(term.var);
        g.edges.push_back(std::move(e));
    }

    Packing p;
    if (options.packer == Packer::greedy)
        p = vcmep_greedy(g);
    else {
        auto sim = vcmep_parallel_sim(g, Stream(seed, Purpose::packing, t, s).next(), options.vcmep);
        p = sim.packing;
        if (! sim.terminated) {
            // Finish a truncated run greedily so the packing is maximal.
            std::vector<std::uint32_t> order(p.edges);
            std::vector<char> in(v.size(), 0);
            for (auto f : p.edges)
                in[f] = 1;
            for (std::uint32_t f = 0; f < v.size(); ++f)
                if (! in[f])
                    order.push_back(f);
            p = vcmep_greedy(g, order);
        }
    }
    std::vector<EventId> out;
    out.reserve(p.edges.size());
    for (auto f : p.edges)
        out.push_back(v[f]);
    return out;
}

void finish(ParallelResult & result, const TruthTracker & tracker)
{
    result.assignment = tracker.assignment();
    result.terminated = tracker.true_events().empty();
}

auto run_coupled(const Instance & instance, std::uint64_t seed, const ParallelOptions & options, Mode mode) -> ParallelResult
{
    auto & space = instance.space();
    auto n = instance.variable_count();
    auto m = instance.event_count();
    auto big_m = instance.max_event_size();

    ParallelResult result;
    result.psi = psi_margin(space);
    TruthTracker tracker(instance, draw_initial(space, seed));
    result.log.initial = tracker.assignment();

    std::vector<std::uint32_t> caps(n);
    std::vector<char> switched(n, 0), in_i(m, 0);
    std::size_t t = 0;
    while (! tracker.true_events().empty()) {
        if (t >= options.max_rounds)
            break;
        ++t;
        Assignment a = tracker.assignment();
        for (VarId i = 0; i < n; ++i)
            caps[i] = capacity(1.0 - space.prob(i, a[i]), big_m, m);
        auto v = tracker.true_events().to_vector();

        for (std::size_t s = 1; ! v.empty(); ++s) {
            auto sel = select_packing(instance, v, caps, options, seed, t, s);
            std::vector<std::vector<Value>> x(sel.size());
            std::vector<double> rho(sel.size());
            parallel_for(sel.size(), [&](std::size_t k) {
                EventId b = sel[k];
                for (auto & term : instance.event(b).terms())
                    x[k].push_back(draw(space, seed, t, s, b, term.var));
                rho[k] = Stream(seed, Purpose::priority, t, s, b).uniform();
            }, options.threads);

            SubRoundRecord rec{t, s, v.size(), sel.size(), 0, 0, 0, std::nullopt};
            std::vector<VarId> switched_now;
            auto apply = [&](std::size_t k) {
                EventId b = sel[k];
                auto terms = instance.event(b).terms();
                LogStep step{result.log.steps.size() + 1, b, {}};
                for (std::size_t q = 0; q < terms.size(); ++q) {
                    VarId i = terms[q].var;
                    if (x[k][q] != a[i]) {
                        if (switched[i])
                            throw ContractViolation("variable " + std::to_string(i) + " switched twice in round ("
                                + std::to_string(t) + "," + std::to_string(s) + ")");
                        switched[i] = 1;
                        switched_now.push_back(i);
                    }
                    tracker.set(i, x[k][q]);
                    step.values.push_back({i, x[k][q]});
                }
                result.log.steps.push_back(std::move(step));
                result.step_rounds.push_back(t);
                ++rec.i_prime_size;
            };

            std::vector<std::size_t> pos(sel.size());
            std::iota(pos.begin(), pos.end(), 0);
            std::sort(pos.begin(), pos.end(), [&](auto l, auto r) { return std::tie(rho[l], sel[l]) < std::tie(rho[r], sel[r]); });
            if (mode == Mode::full) {
                auto g = build_conflict_graph(instance, sel, rho, x, a);
                auto lf = lfmis_greedy(g);
                rec.longest_path = lf.iterations;
                // members come back in priority order, which is also the order of `pos`
                std::size_t next = 0;
                for (auto k : pos)
                    if (next < lf.members.size() && sel[k] == lf.members[next]) {
                        apply(k);
                        ++next;
                    }
            }
            else {
                for (auto k : pos)
                    if (tracker.is_true(sel[k]))
                        apply(k);
            }

            rec.switched = switched_now.size();
            for (EventId b : sel)
                in_i[b] = 1;
            std::vector<EventId> rest;
            for (EventId b : v) {
                if (in_i[b])
                    continue;
                auto terms = instance.event(b).terms();
                if (std::none_of(terms.begin(), terms.end(), [&](auto & term) { return switched[term.var] != 0; }))
                    rest.push_back(b);
            }
            for (EventId b : sel)
                in_i[b] = 0;
            v = std::move(rest);
            if (options.record_states)
                rec.state = tracker.assignment();
            result.trace.push_back(std::move(rec));
        }
        for (VarId i = 0; i < n; ++i)
            switched[i] = 0;
    }
    result.rounds = t;
    finish(result, tracker);
    return result;
}

}

auto run_full(const Instance & instance, std::uint64_t seed, const ParallelOptions & options) -> ParallelResult
{
    return run_coupled(instance, seed, options, Mode::full);
}

auto run_hybrid(const Instance & instance, std::uint64_t seed, const ParallelOptions & options) -> ParallelResult
{
    return run_coupled(instance, seed, options, Mode::hybrid);
}

auto run_simplified(const Instance & instance, std::uint64_t seed, const ParallelOptions & options) -> ParallelResult
{
    auto & space = instance.space();
    auto n = instance.variable_count();

    ParallelResult result;
    result.psi = psi_margin(space);
    if (result.psi < 1e-9)
        result.warnings.push_back("some value has probability close to 1 (psi = " + std::to_string(result.psi)
            + "); the simplified algorithm may need many sub-rounds");
    TruthTracker tracker(instance, draw_initial(space, seed));
    result.log.initial = tracker.assignment();

    std::vector<char> used(n, 0);
    std::size_t t = 0;
    while (! tracker.true_events().empty()) {
        if (t >= options.max_rounds)
            break;
        ++t;
        auto v = tracker.true_events().to_vector();
        for (std::size_t s = 1; ! v.empty(); ++s) {
            std::vector<EventId> sel;
            for (EventId b : v) {
                auto terms = instance.event(b).terms();
                if (std::none_of(terms.begin(), terms.end(), [&](auto & term) { return used[term.var] != 0; })) {
                    sel.push_back(b);
                    for (auto & term : terms)
                        used[term.var] = 1;
                }
            }
            std::vector<std::vector<Value>> x(sel.size());
            parallel_for(sel.size(), [&](std::size_t k) {
                for (auto & term : instance.event(sel[k]).terms())
                    x[k].push_back(draw(space, seed, t, s, sel[k], term.var));
            }, options.threads);

            SubRoundRecord rec{t, s, v.size(), sel.size(), sel.size(), 0, 0, std::nullopt};
            for (std::size_t k = 0; k < sel.size(); ++k) {
                auto terms = instance.event(sel[k]).terms();
                LogStep step{result.log.steps.size() + 1, sel[k], {}};
                for (std::size_t q = 0; q < terms.size(); ++q) {
                    VarId i = terms[q].var;
                    if (tracker.assignment()[i] != x[k][q])
                        ++rec.switched;
                    tracker.set(i, x[k][q]);
                    step.values.push_back({i, x[k][q]});
                    used[i] = 0;
                }
                result.log.steps.push_back(std::move(step));
                result.step_rounds.push_back(t);
            }
            std::vector<EventId> rest;
            std::size_t k = 0;
            for (EventId b : v) {
                if (k < sel.size() && sel[k] == b) {
                    ++k;
                    continue;
                }
                if (tracker.is_true(b))
                    rest.push_back(b);
            }
            v = std::move(rest);
            if (options.record_states)
                rec.state = tracker.assignment();
            result.trace.push_back(std::move(rec));
        }
    }
    result.rounds = t;
    finish(result, tracker);
    return result;
}

auto round_height_check(const Instance & instance, const ParallelResult & result) -> ReplayReport
{
    ReplayReport report;
    for (std::size_t k = 0; k < result.log.size(); ++k) {
        auto h = build_witness_tree(instance, result.log, k + 1).height();
        auto round = result.step_rounds.at(k);
        if (h != round) {
            report.ok = false;
            report.failures.push_back("round " + std::to_string(round) + ", event " + std::to_string(result.log.steps[k].event)
                + ": witness tree height " + std::to_string(h));
        }
    }
    return report;
}

}
