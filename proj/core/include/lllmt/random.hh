#pragma once

#include <cstdint>
#include <span>

namespace lllmt {

/// Purpose tags for keyed substreams. Numeric values are part of the
/// reproducibility contract: changing them changes every seeded result.
enum class Purpose : std::uint64_t {
    initial = 1,    ///< initial draw of variable i: key (i)
    resample = 2,   ///< sequential resampling at step t of variable i: key (t, i)
    rule = 3,       ///< randomized selection rule at step t: key (t)
    proposal = 4,   ///< parallel proposal x_{B,i}: key (round, subround, B, i)
    priority = 5,   ///< parallel priority rho(B): key (round, subround, B)
    packing = 6,    ///< randomized packing inside a sub-round: key (round, subround)
    batch = 7,      ///< per-run seed of a batch experiment: key (run)
    generator = 8,  ///< random instance generators: key (caller-defined)
};

/// Key-derived 64-bit stream. Every draw in the library comes from a stream
/// whose state is a hash of (root seed, purpose, up to four coordinates), so
/// a given random quantity is reproducible independently of how many other
/// draws happened before it. The stream itself is splitmix64.
class Stream {
public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, Purpose purpose, std::uint64_t a = 0, std::uint64_t b = 0,
        std::uint64_t c = 0, std::uint64_t d = 0);

    static constexpr auto min() -> result_type { return 0; }
    static constexpr auto max() -> result_type { return ~result_type{0}; }

    auto operator()() -> result_type { return next(); }
    auto next() -> std::uint64_t;

    /// Uniform double in [0, 1) with 53 random bits.
    auto uniform() -> double;

    /// Uniform integer in [0, n); n must be positive.
    auto below(std::uint64_t n) -> std::uint64_t;

    /// Index drawn from a probability vector. Zero-probability entries are never returned.
    auto categorical(std::span<const double> probs) -> std::uint32_t;

private:
    std::uint64_t _state;
};

auto mix64(std::uint64_t x) -> std::uint64_t;

/// Seed of run `run` within a batch rooted at `seed`.
auto batch_seed(std::uint64_t seed, std::uint64_t run) -> std::uint64_t;

/// Documented default root seed used whenever no seed is supplied.
inline constexpr std::uint64_t default_seed = 20150104;

}
