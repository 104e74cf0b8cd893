#pragma once

#include <cstdint>

namespace esnf {

/// SplitMix64 generator (Steele/Lea/Vigna). Every random draw in this
/// project goes through it so that outputs are bit-identical across
/// platforms and standard-library versions; std:: distributions are
/// implementation-defined and deliberately avoided.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [low, high).
    double next_uniform(double low, double high)
    {
        return low + (high - low) * next_u01();
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Derives the seed of an independent substream from a master seed and up
/// to two stream coordinates. Parallel jobs seeded this way produce the
/// same output regardless of scheduling, and a stream's seed does not
/// depend on how many sibling streams exist.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0)
{
    std::uint64_t s = detail::mix64(master + 0x9e3779b97f4a7c15ull);
    s = detail::mix64(s ^ (a + 0xd1b54a32d192ed03ull));
    s = detail::mix64(s ^ (b + 0x8cb92ba72f3d8dd7ull));
    return s;
}

}  // namespace esnf
