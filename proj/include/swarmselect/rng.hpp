#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace swarmselect {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Hash an ordered tuple of keys into one seed. Used to give every
/// (run, agent, iteration) triple its own independent stream.
inline std::uint64_t derive_seed(std::uint64_t base) { return splitmix64(base); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t next, Rest... rest) {
    return derive_seed(splitmix64(base) ^ (next + 0x632BE59BD9B4E019ULL), static_cast<std::uint64_t>(rest)...);
}

/// Portable random stream. The conversions to doubles are written out here
/// rather than taken from <random> distributions so the draw sequence is the
/// same on every standard library; the step oracles in the tests rely on it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    template <typename... Keys>
    static Rng stream(std::uint64_t seed, Keys... keys) {
        return Rng(derive_seed(seed, static_cast<std::uint64_t>(keys)...));
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n) {
        auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    /// Standard normal via Box-Muller; always consumes exactly two uniforms.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by Rng::index.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng.index(i)]);
    }
}

}  // namespace swarmselect
