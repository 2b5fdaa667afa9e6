#pragma once

#include <lllmt/criteria.hh>
#include <lllmt/model.hh>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lllmt {

/// CNF formula with DIMACS literals: +v / -v for variable v in 1..variables.
struct Cnf {
    std::size_t variables = 0;
    std::vector<std::vector<int>> clauses;
};

/// DIMACS CNF: 'c' comment lines, one `p cnf <vars> <clauses>` header,
/// clauses as literal lists ending in 0 (may span lines), optional '%' trailer.
[[nodiscard]] auto read_dimacs(std::istream & in) -> Cnf;
[[nodiscard]] auto read_dimacs_file(const std::string & path) -> Cnf;
void write_dimacs(std::ostream & out, const Cnf & cnf);

/// Value 1 means true.
[[nodiscard]] auto satisfies(const Cnf & cnf, std::span<const Value> assignment) -> bool;

struct KsatBounds {
    double l_new; ///< occurrence bound of the biased-measure argument
    double l_gst; ///< earlier bound 2^{k+1} / (e (k + 1))
};

[[nodiscard]] auto ksat_bounds(std::size_t k) -> KsatBounds;
/// Optimal per-clause weight for clause size k and occurrence bound L.
[[nodiscard]] auto ksat_alpha(std::size_t k, double L) -> double;
/// Bias strength x = a k L / (2a + 2k + a k L).
[[nodiscard]] auto ksat_x(std::size_t k, double L, double alpha) -> double;
/// P(variable true) = 1/2 - x (delta - 1/2), delta the positive fraction of its occurrences.
[[nodiscard]] auto ksat_true_probability(double x, double delta) -> double;
/// Left minus right side of the balanced-case inequality a >= 2^{-k} (1 + a/k + a L/2)^k.
[[nodiscard]] auto ksat_balanced_slack(std::size_t k, double L, double alpha) -> double;

struct SatConfig {
    std::size_t k = 0;
    std::size_t L = 0;                    ///< largest occurrence count
    std::vector<std::size_t> occurrences; ///< l_i
    std::vector<double> delta;            ///< positive fraction; 1/2 for unused variables
    double x = 0.0;
    double alpha = 0.0;
    std::vector<std::string> warnings;
};

struct SatBuild {
    Instance instance; ///< variable i is DIMACS variable i+1; event c is clause c falsified
    SatConfig config;
    MuVector mu;       ///< alpha for every clause
};

/// Throws InputError for k < 2, unequal clause sizes, or a repeated variable in a clause.
[[nodiscard]] auto ksat_build(const Cnf & cnf) -> SatBuild;

/// The blend closed form checked with mu = alpha, one entry per clause.
[[nodiscard]] auto ksat_clause_check(const SatBuild & build) -> CriterionReport;

/// Random k-CNF where every variable has L slots, half of each polarity
/// (the extra one positive when L is odd). Slots are shuffled and cut into
/// floor(nL/k) clauses of distinct variables; a remainder of nL mod k slots is dropped.
[[nodiscard]] auto random_balanced_ksat(std::size_t n, std::size_t k, std::size_t L, std::uint64_t seed) -> Cnf;

}
