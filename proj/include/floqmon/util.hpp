#ifndef FLOQMON_UTIL_HPP
#define FLOQMON_UTIL_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace floqmon {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-realization seed derivation: order-independent over the sweep grid,
// so resumed or reordered runs reproduce the same streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t disorder_index,
                                 std::uint64_t realization_index) {
    return splitmix64(splitmix64(splitmix64(master) ^ disorder_index) ^
                      (0xd1b54a32d192ed03ULL * (realization_index + 1)));
}

}  // namespace floqmon

#endif
