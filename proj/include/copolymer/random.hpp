#ifndef COPOLYMER_RANDOM_HPP
#define COPOLYMER_RANDOM_HPP

#include <cstdint>
#include <random>

namespace copolymer {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` of a run seeded with `seed`. Independent of
/// thread scheduling: a stream is identified by its index only.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0)
{
    return mix_seed(mix_seed(seed ^ mix_seed(salt)) + index);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace copolymer

#endif  // COPOLYMER_RANDOM_HPP
