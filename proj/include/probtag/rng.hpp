#pragma once

#include <cstdint>
#include <vector>

namespace probtag::nn {

/// Seeded splitmix64 generator. Identical seed => identical stream, on every
/// platform and in every port of this toolkit. The exact algorithm and all
/// derived draws (doubles, bounded indices, shuffles) are written down in
/// docs/numerics.md; do not change them without bumping the model format.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(next_double() * static_cast<double>(n));
    }

    /// Fisher-Yates shuffle, descending pivot.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Deterministically derive an independent stream (used for sub-seeds).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace probtag::nn
