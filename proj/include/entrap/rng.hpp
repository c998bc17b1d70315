#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "entrap/errors.hpp"

namespace entrap {

/// splitmix64 scramble; used to derive well-separated stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based split: stream `index` of a master seed. Episode i is
/// reproducible in isolation from (master, i).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/**
 * Deterministic random stream. Uniform doubles are generated from the raw
 * 64-bit output (53-bit mantissa) rather than std::uniform_real_distribution,
 * whose output is implementation-defined; sequences are therefore identical
 * across platforms for a given seed.
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Index drawn from an (approximately normalized) probability vector by
    /// inverse-CDF walk; the last positive entry absorbs rounding slack.
    int sample(std::span<const double> probs) {
        if (probs.empty()) throw ModelError("sampling from an empty distribution");
        const double u = uniform();
        double acc = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            acc += probs[i];
            last_positive = static_cast<int>(i);
            if (u < acc) return last_positive;
        }
        if (last_positive < 0) throw ModelError("sampling from an all-zero distribution");
        return last_positive;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace entrap
