#pragma once

#include <cstdint>
#include <string_view>

#include "combospec/matrix.hpp"

namespace combospec {

/// FNV-1a over bytes. Used for stream naming and file digests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream. Every consumer derives its own stream from
/// one run seed and a stream name, so draws are reproducible regardless of
/// evaluation order elsewhere in the program.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view name)
        : base_(splitmix64(splitmix64(seed) ^ fnv1a64(name))) {}

    std::uint64_t next_u64() { return splitmix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Integer in [lo, hi], inclusive.
    std::uint64_t uniform_index(std::uint64_t lo, std::uint64_t hi) {
        return lo + next_u64() % (hi - lo + 1);
    }

    Vector uniform_vector(std::size_t n, double lo, double hi) {
        Vector v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace combospec
