#include "cli.hh"

#include <lllmt/criteria.hh>
#include <lllmt/errors.hh>
#include <lllmt/graph_io.hh>
#include <lllmt/hamiltonian.hh>
#include <lllmt/hypergraph_coloring.hh>
#include <lllmt/instance_io.hh>
#include <lllmt/parallel.hh>
#include <lllmt/ramsey.hh>
#include <lllmt/random.hh>
#include <lllmt/sat.hh>
#include <lllmt/sequential.hh>
#include <lllmt/serialization.hh>
#include <lllmt/transversal.hh>
#include <lllmt/vcmep.hh>
#include <lllmt/witness.hh>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lllmt::cli {

namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = default_seed;
    bool json_out = false;
    std::string out_path;
};

void write_file(const std::string & path, const std::string & text)
{
    std::ofstream f(path);
    if (! f)
        throw InputError("cannot write " + path);
    f << text;
}

// JSON goes to stdout with --json, else the text summary does; --out always gets the JSON.
void emit(const Common & c, std::ostream & out, const json & j, const std::string & text)
{
    if (c.json_out)
        out << j.dump(2) << '\n';
    else
        out << text;
    if (! c.out_path.empty())
        write_file(c.out_path, j.dump(2) + "\n");
}

auto read_mu_file(const std::string & path, std::size_t expected) -> MuVector
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open " + path);
    MuVector mu;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            mu.push_back(std::stod(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument(tok);
        }
        catch (const std::exception &) {
            throw InputError("bad weight '" + tok + "' in " + path);
        }
    }
    if (mu.size() != expected)
        throw InputError(path + " holds " + std::to_string(mu.size()) + " weights, the instance has " + std::to_string(expected) + " events");
    return mu;
}

auto rule_named(const std::string & name) -> ResampleRule
{
    if (name == "lowest")
        return lowest_id_rule();
    if (name == "random")
        return random_rule();
    throw InputError("unknown rule '" + name + "' (lowest, random)");
}

auto fixed(double x, int digits = 6) -> std::string
{
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

auto run_summary(const RunResult & r) -> std::string
{
    return (r.stats.terminated ? "terminated" : "did not terminate") + std::string(" after ") + std::to_string(r.stats.steps)
        + " resamplings\n";
}

// ---- check

struct CheckArgs {
    std::string instance;
    std::string criterion = "orderable-exact";
    double epsilon = 0.0;
    std::string relation = "lopsidependency";
    std::string mu_file;
    double tolerance = 0.0;
    bool per_event = false;
};

auto make_criterion(const std::string & kind, double epsilon, const std::string & relation) -> Criterion
{
    Criterion c;
    c.kind = parse_criterion_kind(kind);
    if (! (epsilon >= 0) || ! std::isfinite(epsilon))
        throw InputError("epsilon must be a nonnegative number");
    c.epsilon = epsilon;
    if (relation == "dependency")
        c.relation = NeighborRelation::dependency;
    else if (relation != "lopsidependency")
        throw InputError("unknown relation '" + relation + "' (lopsidependency, dependency)");
    return c;
}

auto cmd_check(const CheckArgs & a, const Common & c, std::ostream & out) -> int
{
    auto instance = read_instance_file(a.instance);
    CriterionEvaluator evaluator(instance, make_criterion(a.criterion, a.epsilon, a.relation));
    json j;
    MuVector mu;
    std::string reason;
    bool searched = a.mu_file.empty();
    if (searched) {
        auto search = find_mu_fixed_point(evaluator);
        j["search"] = to_json(search);
        mu = search.mu;
        reason = search.reason;
    }
    else
        mu = read_mu_file(a.mu_file, instance.event_count());
    auto report = check(evaluator, mu, a.tolerance);
    j["report"] = to_json(report);

    std::ostringstream text;
    text << to_string(report.criterion.kind) << ": " << (report.satisfied ? "satisfied" : "not satisfied");
    if (report.satisfied)
        text << ", W = " << fixed(report.total_weight);
    if (searched)
        text << " (search: " << reason << ")";
    text << '\n';
    if (a.per_event)
        for (auto & e : report.events)
            text << "  event " << e.id << "  mu " << fixed(e.mu) << "  rhs " << fixed(e.rhs) << (e.ok ? "" : "  FAILS") << '\n';
    emit(c, out, j, text.str());
    return report.satisfied ? exit_ok : exit_unsatisfied;
}

// ---- solve-sat

struct SatArgs {
    std::string cnf;
    bool generate = false;
    std::size_t n = 200, k = 6, L = 8;
    std::size_t max_steps = default_max_steps;
    std::string rule = "lowest";
    std::string log_path;
    bool show_assignment = false;
};

auto cmd_solve_sat(const SatArgs & a, const Common & c, std::ostream & out) -> int
{
    if (a.cnf.empty() == ! a.generate)
        throw InputError("give either a DIMACS file or --generate");
    auto cnf = a.generate ? random_balanced_ksat(a.n, a.k, a.L, c.seed) : read_dimacs_file(a.cnf);
    auto build = ksat_build(cnf);
    auto report = ksat_clause_check(build);
    auto result = run(build.instance, c.seed, {.max_steps = a.max_steps, .record_log = ! a.log_path.empty()}, rule_named(a.rule));
    bool sat = result.stats.terminated && satisfies(cnf, result.assignment);
    if (! a.log_path.empty()) {
        std::ofstream f(a.log_path);
        write_log_jsonl(f, result.log);
    }
    auto & cfg = build.config;
    json j{{"variables", cnf.variables}, {"clauses", cnf.clauses.size()}, {"k", cfg.k}, {"L", cfg.L}, {"x", cfg.x}, {"alpha", cfg.alpha},
        {"warnings", cfg.warnings}, {"criterion_satisfied", report.satisfied}, {"W", report.total_weight}, {"run", to_json(result.stats)},
        {"satisfied", sat}};
    j["run"].erase("resample_counts");
    if (a.show_assignment)
        j["assignment"] = result.assignment;

    std::ostringstream text;
    for (auto & w : cfg.warnings)
        text << "warning: " << w << '\n';
    text << cnf.variables << " variables, " << cnf.clauses.size() << " clauses, k = " << cfg.k << ", L = " << cfg.L << '\n'
         << "bias x = " << fixed(cfg.x) << ", alpha = " << fixed(cfg.alpha) << ", blend criterion "
         << (report.satisfied ? "holds" : "fails") << '\n'
         << run_summary(result) << (sat ? "satisfying assignment found\n" : "no satisfying assignment\n");
    if (a.show_assignment) {
        for (std::size_t v = 0; v < result.assignment.size(); ++v)
            text << (result.assignment[v] ? "" : "-") << v + 1 << ' ';
        text << "0\n";
    }
    emit(c, out, j, text.str());
    return sat ? exit_ok : exit_unsatisfied;
}

// ---- solve-hypergraph

struct HypergraphArgs {
    std::string path;
    bool generate = false;
    std::size_t n = 60, k = 6, m = 50, L = 5;
    std::size_t colors = 2;
    std::size_t max_steps = default_max_steps;
};

auto cmd_solve_hypergraph(const HypergraphArgs & a, const Common & c, std::ostream & out) -> int
{
    if (a.path.empty() == ! a.generate)
        throw InputError("give either a hypergraph file or --generate");
    auto g = a.generate ? random_uniform_hypergraph(a.n, a.k, a.m, a.L, c.seed) : read_hypergraph_file(a.path);
    auto build = hypergraph_build(g.vertex_count, g.edges, a.colors);
    auto result = run(build.instance, c.seed, {.max_steps = a.max_steps, .record_log = false});
    bool proper = result.stats.terminated && is_proper_coloring(g.edges, result.assignment);
    json j{{"vertices", g.vertex_count}, {"edges", g.edges.size()}, {"k", build.k}, {"c", build.c}, {"L", build.L},
        {"alpha", build.alpha ? json(*build.alpha) : json(nullptr)}, {"steps", result.stats.steps},
        {"terminated", result.stats.terminated}, {"proper", proper}, {"coloring", result.assignment}};
    std::ostringstream text;
    text << g.vertex_count << " vertices, " << g.edges.size() << " edges of size " << build.k << ", max degree " << build.L << ", "
         << build.c << " colours\n"
         << (build.alpha ? "criterion weight alpha = " + fixed(*build.alpha) : std::string("no criterion weight exists at this degree"))
         << '\n'
         << run_summary(result) << (proper ? "proper colouring found\n" : "no proper colouring\n");
    emit(c, out, j, text.str());
    return proper ? exit_ok : exit_unsatisfied;
}

// ---- solve-transversal

struct TransversalArgs {
    std::string graph, partition;
    bool generate = false;
    std::size_t classes = 20, b = 7, delta = 2;
    std::size_t max_steps = default_max_steps;
};

auto cmd_solve_transversal(const TransversalArgs & a, const Common & c, std::ostream & out) -> int
{
    Graph g;
    std::vector<std::vector<Vertex>> partition;
    if (a.generate)
        std::tie(g, partition) = random_partitioned_graph(a.classes, a.b, a.delta, c.seed);
    else {
        if (a.graph.empty() || a.partition.empty())
            throw InputError("give --graph and --partition, or --generate");
        g = read_edge_list_file(a.graph);
        partition = read_partition_file(a.partition);
    }
    auto build = transversal_build(g, partition);
    bool criterion = build.alpha && check(build.instance, build.mu, Criterion{.kind = CriterionKind::blend_closed_form}, 1e-12).satisfied;
    auto result = run(build.instance, c.seed, {.max_steps = a.max_steps, .record_log = false});
    auto chosen = chosen_vertices(partition, result.assignment);
    bool ok = result.stats.terminated && is_independent(g, chosen);
    json j{{"vertices", g.n}, {"edges", g.edges.size()}, {"dropped_edges", build.dropped_edges}, {"b", build.b},
        {"max_degree", build.max_degree}, {"threshold", transversal_threshold(build.max_degree)},
        {"alpha", build.alpha ? json(*build.alpha) : json(nullptr)}, {"criterion_satisfied", criterion}, {"steps", result.stats.steps},
        {"terminated", result.stats.terminated}, {"independent", ok}, {"transversal", chosen}};
    std::ostringstream text;
    text << partition.size() << " classes of size " << build.b << ", max degree " << build.max_degree << " (threshold "
         << transversal_threshold(build.max_degree) << ")\n"
         << "criterion " << (criterion ? "holds with alpha = " + fixed(*build.alpha) : std::string("fails")) << '\n'
         << run_summary(result) << (ok ? "independent transversal found\n" : "no independent transversal\n");
    emit(c, out, j, text.str());
    return ok ? exit_ok : exit_unsatisfied;
}

// ---- solve-hamiltonian

struct HamiltonArgs {
    std::string graph, cycle;
    bool generate = false;
    std::size_t n = 200, k = 43;
    std::size_t max_steps = default_max_steps;
};

auto cmd_solve_hamiltonian(const HamiltonArgs & a, const Common & c, std::ostream & out) -> int
{
    Graph g;
    std::vector<Vertex> cycle;
    if (a.generate)
        std::tie(g, cycle) = circulant_regular(a.n, a.k, c.seed);
    else {
        if (a.graph.empty() || a.cycle.empty())
            throw InputError("give --graph and --cycle, or --generate");
        g = read_edge_list_file(a.graph);
        cycle = read_cycle_file(a.cycle);
    }
    auto build = hamiltonian_build(g, cycle);
    bool criterion = build.warnings.empty() && check(build.instance, build.mu, Criterion{.kind = CriterionKind::blend_closed_form}).satisfied;
    auto result = run(build.instance, c.seed, {.max_steps = a.max_steps, .record_log = false});
    auto s = selected_vertices(result.assignment);
    bool ok = result.stats.terminated;
    json j{{"vertices", g.n}, {"k", build.k}, {"p", build.p}, {"a", build.a}, {"b", build.b}, {"warnings", build.warnings},
        {"criterion_satisfied", criterion}, {"steps", result.stats.steps}, {"terminated", ok}, {"selected", s}};
    std::ostringstream text;
    for (auto & w : build.warnings)
        text << "warning: " << w << '\n';
    text << g.n << " vertices, " << build.k << "-regular; p = " << fixed(build.p) << ", a = " << fixed(build.a) << ", b = "
         << fixed(build.b) << ", criterion " << (criterion ? "holds" : "fails") << '\n'
         << run_summary(result) << "|S| = " << s.size() << '\n';
    emit(c, out, j, text.str());
    return ok ? exit_ok : exit_unsatisfied;
}

// ---- solve-ramsey

struct RamseyArgs {
    std::size_t n = 20, s = 3, t = 0;
    bool sequential = false;
    std::size_t max_steps = default_max_steps;
};

auto cmd_solve_ramsey(const RamseyArgs & a, const Common & c, std::ostream & out) -> int
{
    auto cfg = ramsey_config(a.n, a.s);
    Assignment coloring;
    std::size_t resamples = 0, initial_red = 0;
    bool terminated = true;
    if (a.sequential) {
        auto [instance, _] = ramsey_build(a.n, a.s);
        initial_red = true_events(instance, draw_initial(instance.space(), c.seed)).size();
        auto result = run(instance, c.seed, {.max_steps = a.max_steps, .record_log = false});
        coloring = result.assignment;
        resamples = result.stats.steps;
        terminated = result.stats.terminated;
    }
    else {
        auto solved = ramsey_solve(a.n, a.s, c.seed);
        coloring = std::move(solved.coloring);
        resamples = solved.resamples;
        initial_red = solved.initial_red;
    }
    auto remaining = red_cliques(a.n, a.s, coloring).size();
    bool ok = terminated && remaining == 0;
    json j{{"n", a.n}, {"s", a.s}, {"p", cfg.p}, {"q", cfg.q}, {"mu", cfg.mu}, {"c_s", cfg.c_s}, {"c_s_prime", cfg.c_s_prime},
        {"initial_red", initial_red}, {"resamples", resamples}, {"terminated", terminated}, {"red_remaining", remaining}};
    std::ostringstream text;
    text << "K_" << a.n << ", red K_" << a.s << " forbidden; p = " << fixed(cfg.p) << ", mu = " << fixed(cfg.mu) << '\n'
         << initial_red << " red cliques initially, " << resamples << " resamplings, " << remaining << " left\n";
    if (a.t >= 2) {
        double bound = ramsey_blue_bound(a.n, a.s, a.t);
        j["t"] = a.t;
        j["blue_bound"] = bound;
        text << "P(a given " << a.t << "-set is blue) <= " << fixed(bound) << '\n';
    }
    emit(c, out, j, text.str());
    return ok ? exit_ok : exit_unsatisfied;
}

// ---- simulate-parallel

struct ParallelArgs {
    std::string instance;
    std::string mode = "full";
    std::string criterion = "orderable-exact";
    double epsilon = 0.5;
    std::string packer = "greedy";
    std::size_t max_rounds = 10'000;
    std::string trace_path, log_path;
    bool check_heights = false;
};

auto cmd_simulate_parallel(const ParallelArgs & a, const Common & c, std::ostream & out) -> int
{
    auto instance = read_instance_file(a.instance);
    ParallelOptions options;
    options.max_rounds = a.max_rounds;
    if (a.packer == "randomized")
        options.packer = Packer::randomized;
    else if (a.packer != "greedy")
        throw InputError("unknown packer '" + a.packer + "' (greedy, randomized)");
    ParallelResult result;
    if (a.mode == "full")
        result = run_full(instance, c.seed, options);
    else if (a.mode == "hybrid")
        result = run_hybrid(instance, c.seed, options);
    else if (a.mode == "simplified")
        result = run_simplified(instance, c.seed, options);
    else
        throw InputError("unknown mode '" + a.mode + "' (full, simplified, hybrid)");

    auto search = find_mu_fixed_point(instance, make_criterion(a.criterion, a.epsilon, "lopsidependency"));
    double w = 0;
    for (double x : search.mu)
        w += x;
    json j = to_json(result);
    j["mode"] = a.mode;
    j["epsilon"] = a.epsilon;
    j["criterion_satisfied"] = search.found;
    j["W"] = search.found ? json(w) : json(nullptr);
    if (search.found)
        j["rounds_scale"] = std::log(w + 2) / a.epsilon;
    if (a.check_heights) {
        auto report = round_height_check(instance, result);
        j["heights_ok"] = report.ok;
        j["height_failures"] = report.failures;
    }
    if (! a.trace_path.empty()) {
        std::ofstream f(a.trace_path);
        write_trace_jsonl(f, result.trace);
    }
    if (! a.log_path.empty()) {
        std::ofstream f(a.log_path);
        write_log_jsonl(f, result.log);
    }
    std::ostringstream text;
    for (auto & w2 : result.warnings)
        text << "warning: " << w2 << '\n';
    text << a.mode << ": " << (result.terminated ? "terminated" : "did not terminate") << " after " << result.rounds << " rounds, "
         << result.trace.size() << " sub-rounds, " << result.log.size() << " resamplings\n";
    if (search.found)
        text << "W = " << fixed(w) << " at epsilon = " << a.epsilon << ", log(W + 2) / epsilon = " << fixed(std::log(w + 2) / a.epsilon)
             << '\n';
    else
        text << "no weights found at epsilon = " << a.epsilon << '\n';
    if (a.check_heights)
        text << "witness heights " << (j["heights_ok"].get<bool>() ? "match" : "do not match") << " round numbers\n";
    emit(c, out, j, text.str());
    return result.terminated ? exit_ok : exit_unsatisfied;
}

// ---- table-hypergraph

struct TableArgs {
    std::size_t colors = 2, kmin = 4, kmax = 11;
};

auto cmd_table(const TableArgs & a, const Common & c, std::ostream & out) -> int
{
    auto rows = hypergraph_table(a.colors, a.kmin, a.kmax);
    json j{{"c", a.colors}, {"rows", json::array()}};
    std::ostringstream text;
    text << std::setw(4) << "k" << std::setw(8) << "L" << std::setw(8) << "L'" << '\n';
    for (auto & r : rows) {
        j["rows"].push_back({{"k", r.k}, {"L", r.l_improved}, {"L_original", r.l_original}});
        text << std::setw(4) << r.k << std::setw(8) << r.l_improved << std::setw(8) << r.l_original << '\n';
    }
    emit(c, out, j, text.str());
    return exit_ok;
}

// ---- bounds

struct BoundsArgs {
    bool ksat = false, hypergraph = false, transversal = false, hamiltonian = false, ramsey = false;
    std::size_t k = 6, colors = 2, delta = 2, n = 20, s = 3, t = 5;
    double resolution = 1e-4;
};

auto cmd_bounds(const BoundsArgs & a, const Common & c, std::ostream & out) -> int
{
    int chosen = a.ksat + a.hypergraph + a.transversal + a.hamiltonian + a.ramsey;
    if (chosen != 1)
        throw InputError("choose exactly one of --ksat, --hypergraph, --transversal, --hamiltonian, --ramsey");
    json j;
    std::ostringstream text;
    if (a.ksat) {
        auto b = ksat_bounds(a.k);
        auto L = static_cast<std::size_t>(std::floor(b.l_new));
        j = {{"k", a.k}, {"L_new", b.l_new}, {"L_gst", b.l_gst}, {"L", L}, {"alpha", ksat_alpha(a.k, static_cast<double>(L))}};
        text << "k = " << a.k << ": L_new = " << fixed(b.l_new) << ", L_gst = " << fixed(b.l_gst) << '\n';
    }
    else if (a.hypergraph) {
        auto lnew = hypergraph_lmax(a.colors, a.k, HypergraphCriterion::improved);
        auto lold = hypergraph_lmax(a.colors, a.k, HypergraphCriterion::original);
        j = {{"c", a.colors}, {"k", a.k}, {"L", lnew}, {"L_original", lold}, {"L_asymptotic", hypergraph_closed_form_l(a.colors, a.k)}};
        text << "c = " << a.colors << ", k = " << a.k << ": L = " << lnew << ", L' = " << lold << ", asymptotic "
             << fixed(hypergraph_closed_form_l(a.colors, a.k)) << '\n';
    }
    else if (a.transversal) {
        auto b = transversal_threshold(a.delta);
        auto alpha = transversal_alpha(b, a.delta);
        j = {{"delta", a.delta}, {"b", b}, {"alpha", alpha ? json(*alpha) : json(nullptr)}};
        text << "Delta = " << a.delta << ": classes of size b >= " << b << " suffice" << (alpha ? ", alpha = " + fixed(*alpha) : "") << '\n';
    }
    else if (a.hamiltonian) {
        auto k = hamiltonian_threshold(a.resolution);
        j = {{"resolution", a.resolution}, {"k", k ? json(*k) : json(nullptr)}};
        if (k) {
            auto w = *hamiltonian_search(*k, a.resolution).weights;
            j["p"] = w.p;
            j["a"] = w.a;
            j["b"] = w.b;
            text << "smallest feasible degree k = " << *k << " (p = " << fixed(w.p) << ", a = " << fixed(w.a) << ", b = " << fixed(w.b) << ")\n";
        }
        else
            text << "no feasible degree found\n";
    }
    else {
        auto cfg = ramsey_config(a.n, a.s);
        j = {{"n", a.n}, {"s", a.s}, {"t", a.t}, {"p", cfg.p}, {"q", cfg.q}, {"mu", cfg.mu}, {"c_s", cfg.c_s}, {"c_s_prime", cfg.c_s_prime},
            {"blue_bound", ramsey_blue_bound(a.n, a.s, a.t)}};
        text << "n = " << a.n << ", s = " << a.s << ": p = " << fixed(cfg.p) << ", c_s = " << fixed(cfg.c_s) << ", c'_s = "
             << fixed(cfg.c_s_prime) << ", blue K_" << a.t << " bound " << fixed(ramsey_blue_bound(a.n, a.s, a.t)) << '\n';
    }
    emit(c, out, j, text.str());
    return exit_ok;
}

// ---- stats

struct StatsArgs {
    std::string instance;
    std::size_t runs = 1000;
    std::string criterion = "orderable-exact";
    std::string target;
    std::size_t max_steps = default_max_steps;
};

auto cmd_stats(const StatsArgs & a, const Common & c, std::ostream & out) -> int
{
    auto instance = read_instance_file(a.instance);
    if (a.runs == 0)
        throw InputError("--runs must be positive");
    auto search = find_mu_fixed_point(instance, make_criterion(a.criterion, 0.0, "lopsidependency"));
    RunOptions options{.max_steps = a.max_steps, .record_log = false};
    auto batch = run_batch(instance, c.seed, a.runs, options);
    json j{{"criterion_satisfied", search.found}, {"batch", to_json(batch)}};
    std::ostringstream text;
    text << batch.terminated << " of " << batch.runs << " runs terminated, mean " << fixed(batch.mean_steps) << " resamplings\n";
    bool within = true;
    if (search.found) {
        j["mu"] = search.mu;
        json rows = json::array();
        for (EventId id = 0; id < instance.event_count(); ++id) {
            double slack = 3 * batch.sd_resamples[id] / std::sqrt(static_cast<double>(batch.runs));
            bool ok = batch.mean_resamples[id] <= search.mu[id] + slack;
            within = within && ok;
            rows.push_back({{"id", id}, {"mean", batch.mean_resamples[id]}, {"mu", search.mu[id]}, {"ok", ok}});
            text << "  event " << id << ": mean " << fixed(batch.mean_resamples[id]) << " vs mu " << fixed(search.mu[id])
                 << (ok ? "" : "  EXCEEDS") << '\n';
        }
        j["events"] = std::move(rows);
        if (! a.target.empty()) {
            auto est = estimate_event_probability(instance, search.mu, parse_event(a.target), a.runs, c.seed, options);
            j["target"] = to_json(est);
            text << "target frequency " << fixed(est.frequency) << " vs bound " << fixed(est.bound) << '\n';
        }
    }
    else
        text << "no weights found: " << search.reason << '\n';
    j["within_bounds"] = within;
    emit(c, out, j, text.str());
    return batch.terminated == batch.runs && within ? exit_ok : exit_unsatisfied;
}

// ---- pack

struct PackArgs {
    std::string path;
    std::string algorithm = "greedy";
    double eps = 0.25;
    std::uint32_t capacity = 1;
};

auto cmd_pack(const PackArgs & a, const Common & c, std::ostream & out) -> int
{
    if (! (a.eps > 0.0 && a.eps <= 0.5))
        throw InputError("--eps must lie in (0, 1/2]");
    auto g = read_hypergraph_file(a.path, a.capacity);
    json j;
    Packing p;
    if (a.algorithm == "greedy") {
        p = vcmep_greedy(g);
        j = {{"edges", p.edges}, {"load", p.load}};
    }
    else if (a.algorithm == "randomized") {
        VcmepOptions options;
        options.eps = a.eps;
        auto r = vcmep_parallel_sim(g, c.seed, options);
        p = r.packing;
        j = to_json(r);
    }
    else
        throw InputError("unknown algorithm '" + a.algorithm + "' (greedy, randomized)");
    bool feasible = is_feasible(g, p), maximal = is_maximal(g, p);
    j["feasible"] = feasible;
    j["maximal"] = maximal;
    std::ostringstream text;
    text << p.edges.size() << " of " << g.edges.size() << " edges packed; " << (feasible ? "feasible" : "infeasible") << ", "
         << (maximal ? "maximal" : "not maximal") << '\n';
    for (auto e : p.edges)
        text << e << ' ';
    text << '\n';
    emit(c, out, j, text.str());
    return feasible && maximal ? exit_ok : exit_unsatisfied;
}

}

auto run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int
{
    CLI::App app{"Constructive local lemma toolkit: criteria, resampling, witness trees, parallel rounds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lllmt 0.3.0");
    Common common;
    auto add_common = [&](CLI::App * sub) {
        sub->add_option("--seed", common.seed, "root seed (default " + std::to_string(default_seed) + ")");
        sub->add_flag("--json", common.json_out, "print JSON instead of a summary");
        sub->add_option("--out", common.out_path, "also write the JSON result to this file");
    };

    CheckArgs check_args;
    auto * check_cmd = app.add_subcommand("check", "criterion report for an instance file");
    check_cmd->add_option("instance", check_args.instance, "instance file")->required();
    check_cmd->add_option("--criterion", check_args.criterion, "criterion kind");
    check_cmd->add_option("--epsilon", check_args.epsilon, "slack multiplier (1 + epsilon) on every right-hand side");
    check_cmd->add_option("--relation", check_args.relation, "neighbour relation: lopsidependency or dependency");
    check_cmd->add_option("--mu", check_args.mu_file, "weights file; without it weights come from the fixed-point search");
    check_cmd->add_option("--tolerance", check_args.tolerance, "relative tolerance of the comparison");
    check_cmd->add_flag("--events", check_args.per_event, "list every event in the summary");
    add_common(check_cmd);

    SatArgs sat_args;
    auto * sat_cmd = app.add_subcommand("solve-sat", "k-SAT through the biased measure");
    sat_cmd->add_option("cnf", sat_args.cnf, "DIMACS CNF file");
    sat_cmd->add_flag("--generate", sat_args.generate, "use a random balanced formula instead of a file");
    sat_cmd->add_option("--n", sat_args.n, "variables of the generated formula");
    sat_cmd->add_option("--k", sat_args.k, "clause size of the generated formula");
    sat_cmd->add_option("--L", sat_args.L, "occurrences per variable in the generated formula");
    sat_cmd->add_option("--max-steps", sat_args.max_steps, "resampling cap");
    sat_cmd->add_option("--rule", sat_args.rule, "selection rule: lowest or random");
    sat_cmd->add_option("--log", sat_args.log_path, "write the execution log as JSON lines");
    sat_cmd->add_flag("--assignment", sat_args.show_assignment, "print the assignment");
    add_common(sat_cmd);

    HypergraphArgs hyp_args;
    auto * hyp_cmd = app.add_subcommand("solve-hypergraph", "proper colouring of a uniform hypergraph");
    hyp_cmd->add_option("hypergraph", hyp_args.path, "hypergraph file (capacities ignored)");
    hyp_cmd->add_flag("--generate", hyp_args.generate, "use a random hypergraph instead of a file");
    hyp_cmd->add_option("--n", hyp_args.n, "vertices of the generated hypergraph");
    hyp_cmd->add_option("--k", hyp_args.k, "edge size of the generated hypergraph");
    hyp_cmd->add_option("--m", hyp_args.m, "edges of the generated hypergraph");
    hyp_cmd->add_option("--L", hyp_args.L, "degree bound of the generated hypergraph");
    hyp_cmd->add_option("--c", hyp_args.colors, "number of colours");
    hyp_cmd->add_option("--max-steps", hyp_args.max_steps, "resampling cap");
    add_common(hyp_cmd);

    TransversalArgs tr_args;
    auto * tr_cmd = app.add_subcommand("solve-transversal", "independent transversal of a partitioned graph");
    tr_cmd->add_option("--graph", tr_args.graph, "edge list");
    tr_cmd->add_option("--partition", tr_args.partition, "partition file, one class per line");
    tr_cmd->add_flag("--generate", tr_args.generate, "use a random partitioned graph");
    tr_cmd->add_option("--classes", tr_args.classes, "classes of the generated graph");
    tr_cmd->add_option("--b", tr_args.b, "class size of the generated graph");
    tr_cmd->add_option("--delta", tr_args.delta, "degree bound of the generated graph");
    tr_cmd->add_option("--max-steps", tr_args.max_steps, "resampling cap");
    add_common(tr_cmd);

    HamiltonArgs ham_args;
    auto * ham_cmd = app.add_subcommand("solve-hamiltonian", "vertex set meeting the Hamiltonian-cycle conditions");
    ham_cmd->add_option("--graph", ham_args.graph, "edge list of a k-regular graph");
    ham_cmd->add_option("--cycle", ham_args.cycle, "Hamiltonian cycle as a vertex sequence");
    ham_cmd->add_flag("--generate", ham_args.generate, "use a circulant graph");
    ham_cmd->add_option("--n", ham_args.n, "vertices of the generated graph");
    ham_cmd->add_option("--k", ham_args.k, "degree of the generated graph");
    ham_cmd->add_option("--max-steps", ham_args.max_steps, "resampling cap");
    add_common(ham_cmd);

    RamseyArgs ram_args;
    auto * ram_cmd = app.add_subcommand("solve-ramsey", "colouring of K_n without red K_s");
    ram_cmd->add_option("--n", ram_args.n, "vertices");
    ram_cmd->add_option("--s", ram_args.s, "forbidden red clique size");
    ram_cmd->add_option("--t", ram_args.t, "also report the blue K_t bound");
    ram_cmd->add_flag("--sequential", ram_args.sequential, "build the full instance and run the generic algorithm");
    ram_cmd->add_option("--max-steps", ram_args.max_steps, "resampling cap (with --sequential)");
    add_common(ram_cmd);

    ParallelArgs par_args;
    auto * par_cmd = app.add_subcommand("simulate-parallel", "round-based parallel resampling");
    par_cmd->add_option("instance", par_args.instance, "instance file")->required();
    par_cmd->add_option("--mode", par_args.mode, "full, simplified or hybrid");
    par_cmd->add_option("--criterion", par_args.criterion, "criterion used for W");
    par_cmd->add_option("--epsilon", par_args.epsilon, "slack used for W");
    par_cmd->add_option("--packer", par_args.packer, "greedy or randomized");
    par_cmd->add_option("--max-rounds", par_args.max_rounds, "round cap");
    par_cmd->add_option("--trace", par_args.trace_path, "write sub-round records as JSON lines");
    par_cmd->add_option("--log", par_args.log_path, "write the flattened resampling log as JSON lines");
    par_cmd->add_flag("--check-heights", par_args.check_heights, "verify witness heights against round numbers");
    add_common(par_cmd);

    TableArgs table_args;
    auto * table_cmd = app.add_subcommand("table-hypergraph", "largest degree L per edge size, both criteria");
    table_cmd->add_option("--c", table_args.colors, "colours");
    table_cmd->add_option("--kmin", table_args.kmin, "smallest edge size");
    table_cmd->add_option("--kmax", table_args.kmax, "largest edge size");
    add_common(table_cmd);

    BoundsArgs bounds_args;
    auto * bounds_cmd = app.add_subcommand("bounds", "closed-form and numeric bounds");
    bounds_cmd->add_flag("--ksat", bounds_args.ksat, "occurrence bounds for k-SAT");
    bounds_cmd->add_flag("--hypergraph", bounds_args.hypergraph, "degree bounds for hypergraph colouring");
    bounds_cmd->add_flag("--transversal", bounds_args.transversal, "class size for independent transversals");
    bounds_cmd->add_flag("--hamiltonian", bounds_args.hamiltonian, "degree threshold for the Hamiltonian-cycle construction");
    bounds_cmd->add_flag("--ramsey", bounds_args.ramsey, "Ramsey colouring parameters");
    bounds_cmd->add_option("--k", bounds_args.k, "clause or edge size");
    bounds_cmd->add_option("--c", bounds_args.colors, "colours");
    bounds_cmd->add_option("--delta", bounds_args.delta, "max degree");
    bounds_cmd->add_option("--resolution", bounds_args.resolution, "grid step for p");
    bounds_cmd->add_option("--n", bounds_args.n, "vertices");
    bounds_cmd->add_option("--s", bounds_args.s, "red clique size");
    bounds_cmd->add_option("--t", bounds_args.t, "blue clique size");
    add_common(bounds_cmd);

    StatsArgs stats_args;
    auto * stats_cmd = app.add_subcommand("stats", "batch of seeded runs against the weight bounds");
    stats_cmd->add_option("instance", stats_args.instance, "instance file")->required();
    stats_cmd->add_option("--runs", stats_args.runs, "number of runs");
    stats_cmd->add_option("--criterion", stats_args.criterion, "criterion for the weights");
    stats_cmd->add_option("--target", stats_args.target, "atomic event \"(i,j) ...\" whose final probability is estimated");
    stats_cmd->add_option("--max-steps", stats_args.max_steps, "resampling cap per run");
    add_common(stats_cmd);

    PackArgs pack_args;
    auto * pack_cmd = app.add_subcommand("pack", "maximal packing of a capacitated hypergraph");
    pack_cmd->add_option("hypergraph", pack_args.path, "hypergraph file")->required();
    pack_cmd->add_option("--algorithm", pack_args.algorithm, "greedy or randomized");
    pack_cmd->add_option("--eps", pack_args.eps, "water-filling slack, in (0, 1/2]");
    pack_cmd->add_option("--capacity", pack_args.capacity, "capacity of vertices without a cap line");
    add_common(pack_cmd);

    std::vector<std::string> argv_store{"lllmt"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (auto & s : argv_store)
        argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::Success & e) {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e, out, err);
        return exit_input;
    }

    try {
        if (*check_cmd)
            return cmd_check(check_args, common, out);
        if (*sat_cmd)
            return cmd_solve_sat(sat_args, common, out);
        if (*hyp_cmd)
            return cmd_solve_hypergraph(hyp_args, common, out);
        if (*tr_cmd)
            return cmd_solve_transversal(tr_args, common, out);
        if (*ham_cmd)
            return cmd_solve_hamiltonian(ham_args, common, out);
        if (*ram_cmd)
            return cmd_solve_ramsey(ram_args, common, out);
        if (*par_cmd)
            return cmd_simulate_parallel(par_args, common, out);
        if (*table_cmd)
            return cmd_table(table_args, common, out);
        if (*bounds_cmd)
            return cmd_bounds(bounds_args, common, out);
        if (*stats_cmd)
            return cmd_stats(stats_args, common, out);
        if (*pack_cmd)
            return cmd_pack(pack_args, common, out);
    }
    catch (const InputError & e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    catch (const InvalidInstance & e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    catch (const CapacityExceeded & e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    }
    catch (const ContractViolation & e) {
        err << "internal error: " << e.what() << '\n';
        return exit_unsatisfied;
    }
    return exit_input;
}

}
