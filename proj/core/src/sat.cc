#include <lllmt/sat.hh>

#include <lllmt/errors.hh>
#include <lllmt/random.hh>

#include "text.hh"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>

namespace lllmt {

auto read_dimacs(std::istream & in) -> Cnf
{
    Cnf cnf;
    std::optional<std::size_t> declared_clauses;
    std::vector<int> current;
    std::string raw;
    std::size_t line = 0;
    bool done = false;
    while (! done && std::getline(in, raw)) {
        ++line;
        auto tok = text::tokens(raw);
        if (tok.empty() || tok[0][0] == 'c')
            continue;
        if (tok[0] == "p") {
            if (declared_clauses)
                throw InputError(line, "second problem line");
            if (tok.size() != 4 || tok[1] != "cnf")
                throw InputError(line, "expected 'p cnf <variables> <clauses>'");
            cnf.variables = text::parse_number<std::size_t>(tok[2], line, "variable count");
            declared_clauses = text::parse_number<std::size_t>(tok[3], line, "clause count");
            continue;
        }
        if (! declared_clauses)
            throw InputError(line, "clause before the problem line");
        for (auto & t : tok) {
            if (t == "%") {
                done = true;
                break;
            }
            int lit = text::parse_number<int>(t, line, "literal");
            if (lit == 0) {
                if (current.empty())
                    throw InputError(line, "empty clause");
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (static_cast<std::size_t>(std::abs(lit)) > cnf.variables)
                throw InputError(line, "literal " + t + " exceeds the declared variable count");
            current.push_back(lit);
        }
    }
    if (! declared_clauses)
        throw InputError("missing 'p cnf' problem line");
    if (! current.empty()) // a last clause without its terminating 0 is tolerated
        cnf.clauses.push_back(std::move(current));
    if (cnf.clauses.size() != *declared_clauses)
        throw InputError(line, "header declares " + std::to_string(*declared_clauses) + " clauses but "
            + std::to_string(cnf.clauses.size()) + " were read");
    return cnf;
}

auto read_dimacs_file(const std::string & path) -> Cnf
{
    std::ifstream in(path);
    if (! in)
        throw InputError("cannot open " + path);
    return read_dimacs(in);
}

void write_dimacs(std::ostream & out, const Cnf & cnf)
{
    out << "p cnf " << cnf.variables << ' ' << cnf.clauses.size() << '\n';
    for (auto & clause : cnf.clauses) {
        for (int lit : clause)
            out << lit << ' ';
        out << "0\n";
    }
}

auto satisfies(const Cnf & cnf, std::span<const Value> assignment) -> bool
{
    return std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](auto & clause) {
        return std::any_of(clause.begin(), clause.end(), [&](int lit) {
            return (assignment[std::abs(lit) - 1] == 1) == (lit > 0);
        });
    });
}

auto ksat_bounds(std::size_t k) -> KsatBounds
{
    if (k < 2)
        throw InputError("clause size must be at least 2");
    double kd = static_cast<double>(k);
    double top = std::pow(2.0, kd + 1);
    return {
        top * std::pow(1 - 1 / kd, kd) / (kd - 1) - 2 / kd,
        top / (std::numbers::e * (kd + 1)),
    };
}

auto ksat_alpha(std::size_t k, double L) -> double
{
    double kd = static_cast<double>(k);
    double base = 2 + kd * L;
    return 2 * kd * (std::pow(std::pow(2.0, kd + 1) / base, 1 / (kd - 1)) - 1) / base;
}

auto ksat_x(std::size_t k, double L, double alpha) -> double
{
    double kd = static_cast<double>(k);
    return alpha * kd * L / (2 * alpha + 2 * kd + alpha * kd * L);
}

auto ksat_true_probability(double x, double delta) -> double
{
    return 0.5 - x * (delta - 0.5);
}

auto ksat_balanced_slack(std::size_t k, double L, double alpha) -> double
{
    double kd = static_cast<double>(k);
    return alpha - std::pow(2.0, -kd) * std::pow(1 + alpha / kd + alpha * L / 2, kd);
}

auto ksat_build(const Cnf & cnf) -> SatBuild
{
    if (cnf.clauses.empty())
        throw InputError("formula has no clauses");
    std::size_t k = cnf.clauses.front().size();
    if (k < 2)
        throw InputError("clause size must be at least 2");

    SatConfig config;
    config.k = k;
    config.occurrences.assign(cnf.variables, 0);
    std::vector<std::size_t> positive(cnf.variables, 0);
    for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
        auto & clause = cnf.clauses[c];
        if (clause.size() != k)
            throw InputError("clause " + std::to_string(c + 1) + " has " + std::to_string(clause.size()) + " literals, expected "
                + std::to_string(k));
        std::vector<int> vars;
        for (int lit : clause)
            vars.push_back(std::abs(lit));
        std::sort(vars.begin(), vars.end());
        if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
            throw InputError("clause " + std::to_string(c + 1) + " repeats a variable");
        for (int lit : clause) {
            auto v = static_cast<std::size_t>(std::abs(lit)) - 1;
            ++config.occurrences[v];
            if (lit > 0)
                ++positive[v];
        }
    }
    config.L = *std::max_element(config.occurrences.begin(), config.occurrences.end());
    config.delta.resize(cnf.variables);
    for (std::size_t v = 0; v < cnf.variables; ++v)
        config.delta[v] = config.occurrences[v] ? static_cast<double>(positive[v]) / static_cast<double>(config.occurrences[v]) : 0.5;

    auto bounds = ksat_bounds(k);
    auto L = static_cast<double>(config.L);
    if (L > bounds.l_new)
        config.warnings.push_back("occurrence bound L = " + std::to_string(config.L) + " exceeds " + std::to_string(bounds.l_new)
            + "; the criterion may fail");
    config.alpha = ksat_alpha(k, L);
    if (! (config.alpha > 0)) {
        config.warnings.push_back("optimal weight is not positive; using the uniform measure");
        config.alpha = 0;
    }
    config.x = ksat_x(k, L, config.alpha);

    std::vector<std::vector<double>> probs(cnf.variables);
    for (std::size_t v = 0; v < cnf.variables; ++v) {
        double t = ksat_true_probability(config.x, config.delta[v]);
        probs[v] = {1 - t, t};
    }
    std::vector<BadEvent> events;
    events.reserve(cnf.clauses.size());
    for (auto & clause : cnf.clauses) {
        std::vector<Term> terms;
        for (int lit : clause)
            terms.push_back({static_cast<VarId>(std::abs(lit) - 1), lit > 0 ? Value{0} : Value{1}});
        events.emplace_back(std::move(terms));
    }
    SatBuild out{Instance(VariableSpace(std::move(probs)), std::move(events)), std::move(config), {}};
    out.mu.assign(out.instance.event_count(), out.config.alpha);
    return out;
}

auto ksat_clause_check(const SatBuild & build) -> CriterionReport
{
    return check(build.instance, build.mu, Criterion{.kind = CriterionKind::blend_closed_form});
}

auto random_balanced_ksat(std::size_t n, std::size_t k, std::size_t L, std::uint64_t seed) -> Cnf
{
    if (k < 2 || k > n)
        throw InputError("need 2 <= k <= n");
    std::vector<int> slots;
    for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t j = 0; j < L; ++j)
            slots.push_back(j < (L + 1) / 2 ? static_cast<int>(v) : -static_cast<int>(v));
    std::size_t m = n * L / k;

    for (std::uint64_t attempt = 0;; ++attempt) {
        Stream rng(seed, Purpose::generator, 0x5a7, attempt);
        auto s = slots;
        for (std::size_t i = s.size(); i > 1; --i)
            std::swap(s[i - 1], s[rng.below(i)]);
        Cnf cnf{n, {}};
        bool stuck = false;
        for (std::size_t c = 0; c < m && ! stuck; ++c) {
            std::vector<int> clause;
            for (std::size_t p = c * k; p < (c + 1) * k; ++p) {
                auto fresh = [&](int lit) {
                    return std::none_of(clause.begin(), clause.end(), [&](int o) { return std::abs(o) == std::abs(lit); });
                };
                if (! fresh(s[p])) {
                    auto it = std::find_if(s.begin() + static_cast<std::ptrdiff_t>(p) + 1, s.end(), fresh);
                    if (it == s.end()) {
                        stuck = true;
                        break;
                    }
                    std::swap(s[p], *it);
                }
                clause.push_back(s[p]);
            }
            cnf.clauses.push_back(std::move(clause));
        }
        if (! stuck)
            return cnf;
    }
}

}
