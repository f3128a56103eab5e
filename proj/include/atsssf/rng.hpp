#pragma once

#include <cstdint>
#include <initializer_list>

namespace atsssf {

/// Deterministic splitmix64 generator with hand-rolled distributions.
///
/// The standard library distributions are implementation-defined, so a
/// simulator that promises byte-identical reruns across toolchains cannot
/// use them. Every stochastic component of the pipeline owns an Rng derived
/// from (seed, path...) and never shares state, which keeps parallel and
/// serial client execution bit-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via Box-Muller (no cached spare; call order stable).
    double gaussian();

    double gaussian(double mean, double stddev);

    /// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape);

private:
    std::uint64_t state_;
};

constexpr std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 1469598103934665603ull;
    while (*s != '\0') {
        h ^= static_cast<std::uint64_t>(*s++);
        h *= 1099511628211ull;
    }
    return h;
}

/// Mixes a base seed with a path of tags into an independent substream seed.
/// Example: derive(seed, {fnv1a("train"), round, client_id}).
std::uint64_t derive(std::uint64_t base, std::initializer_list<std::uint64_t> path);

inline Rng derive_rng(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    return Rng(derive(base, path));
}

}  // namespace atsssf
