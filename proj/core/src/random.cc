#include <lllmt/random.hh>

#include <stdexcept>

namespace lllmt {

auto mix64(std::uint64_t x) -> std::uint64_t
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, Purpose purpose, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL));
    h = mix64(h ^ mix64(a + 0x1000000000000001ULL));
    h = mix64(h ^ mix64(b + 0x2000000000000003ULL));
    h = mix64(h ^ mix64(c + 0x3000000000000005ULL));
    h = mix64(h ^ mix64(d + 0x4000000000000007ULL));
    _state = h;
}

auto Stream::next() -> std::uint64_t
{
    _state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = _state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

auto Stream::uniform() -> double
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

auto Stream::below(std::uint64_t n) -> std::uint64_t
{
    if (n == 0)
        throw std::invalid_argument("Stream::below: empty range");
    // Lemire's nearly-divisionless rejection.
    __extension__ using u128 = unsigned __int128;
    for (;;) {
        u128 m = static_cast<u128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low >= n || low >= (-n) % n)
            return static_cast<std::uint64_t>(m >> 64);
    }
}

auto Stream::categorical(std::span<const double> probs) -> std::uint32_t
{
    double u = uniform();
    double cumulative = 0.0;
    std::uint32_t last_positive = 0;
    for (std::uint32_t j = 0; j < probs.size(); ++j) {
        if (probs[j] <= 0.0)
            continue;
        last_positive = j;
        cumulative += probs[j];
        if (u < cumulative)
            return j;
    }
    // u landed in the rounding gap above the final cumulative sum
    return last_positive;
}

auto batch_seed(std::uint64_t seed, std::uint64_t run) -> std::uint64_t
{
    return Stream(seed, Purpose::batch, run).next();
}

}
