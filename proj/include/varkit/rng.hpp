#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <numbers>
#include <random>
#include <string_view>

namespace varkit {

/// FNV-1a 64-bit hash. Used for instrument substream derivation and for
/// provenance hashes embedded in outputs.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Incremental FNV-1a over raw bytes, for hashing mixed content
/// (strings, ints, double bit patterns) into one provenance value.
inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv_add(std::uint64_t h, std::string_view s) {
    return fnv1a64_bytes(s.data(), s.size(), h);
}

inline std::uint64_t fnv_add(std::uint64_t h, std::uint64_t v) {
    return fnv1a64_bytes(&v, sizeof v, h);
}

inline std::uint64_t fnv_add(std::uint64_t h, std::int64_t v) {
    return fnv_add(h, static_cast<std::uint64_t>(v));
}

/// Doubles are hashed by bit pattern, so hashes are exact and need no
/// decimal formatting choices.
inline std::uint64_t fnv_add(std::uint64_t h, double v) {
    return fnv_add(h, std::bit_cast<std::uint64_t>(v));
}

/// splitmix64 step; the standard finalizer used to decorrelate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic stream RNG: a base seed plus a stream index yields an
/// independent, reproducible generator. Normal deviates use an explicit
/// Box-Muller transform so sequences are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0x632be59bd9b4e019ull * (stream + 1));
        const std::uint64_t a = splitmix64(s);
        const std::uint64_t b = splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        gen_.seed(seq);
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    }

    /// Standard normal via Box-Muller; caches the second deviate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream index for a named instrument: seeds derived per id so adding
/// or reordering instruments never changes another instrument's draws.
inline std::uint64_t instrument_stream(std::string_view id) { return fnv1a64(id); }

} // namespace varkit
