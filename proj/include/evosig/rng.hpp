#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evosig {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace detail

/// Seed for the stream named (seed, purpose, a, b). Every random draw in the
/// project comes from a stream derived this way, so results never depend on
/// the order in which streams are consumed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::string_view purpose,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = detail::splitmix64(seed);
    h = detail::splitmix64(h ^ detail::fnv1a(purpose));
    h = detail::splitmix64(h ^ a);
    h = detail::splitmix64(h ^ (b + 0x632BE59BD9B4E019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t seed, std::string_view purpose,
                       std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng{stream_seed(seed, purpose, a, b)};
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>{lo, hi}(rng);
}

inline double gaussian(Rng& rng, double sigma) {
    return std::normal_distribution<double>{0.0, sigma}(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

inline std::size_t pick_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
}

} // namespace evosig
