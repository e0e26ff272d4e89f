#pragma once

#include <cstdint>
#include <random>

namespace kyle::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for one fixed partition of a Monte Carlo run. The
/// partition count never depends on the thread count, so results do not
/// either.
inline std::mt19937_64 partition_engine(std::uint64_t seed, std::uint64_t partition) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(partition + 1)));
}

/// Uniform draw on [lo, hi) from 53 random bits.
inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

} // namespace kyle::detail
