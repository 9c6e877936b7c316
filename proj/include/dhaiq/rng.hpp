#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dhaiq {

/// Seeded deterministic generator.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements the derived draws itself, because the standard distributions are
/// implementation-defined and would make results toolchain-dependent.
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal();

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and a tuple of keys.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

} // namespace dhaiq
