#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sawtooth {

// Deterministic noise streams built from the SplitMix64 mixer and the
// Box-Muller transform (cosine branch). A stream is addressed by up to three
// 64-bit words; the i-th draw is a pure function of (address, i), so draws
// can be generated out of order and in parallel with no shared state.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : key_(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b)) {}

    /// 53-bit uniform draw, strictly inside (0, 1).
    double uniform(std::uint64_t index) const {
        const std::uint64_t bits = splitmix64(key_ + index * 0x9e3779b97f4a7c15ULL);
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw: z_i = sqrt(-2 ln u) cos(2 pi v) with (u, v) the
    /// uniforms at indices (2i, 2i+1).
    double gaussian(std::uint64_t index) const {
        const double u = uniform(2 * index);
        const double v = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

private:
    std::uint64_t key_;
};

enum class Branch : std::uint64_t { forward = 0, backward = 1 };

/// Per-step kick noise for one realization of one evolution branch.
/// zeta_t ~ N(0, sigma^2), i.i.d.; fully determined by
/// (master_seed, realization, branch, t).
struct NoisePlan {
    double sigma = 0.0;
    std::uint64_t master_seed = 0;
    std::uint64_t realization = 0;
    Branch branch = Branch::forward;

    NoiseStream stream() const {
        return NoiseStream(master_seed, realization, static_cast<std::uint64_t>(branch));
    }

    /// Kick perturbation at step t (1-based).
    double kick(std::uint64_t t) const {
        if (t == 0) throw std::invalid_argument("NoisePlan::kick: steps are 1-based");
        return sigma == 0.0 ? 0.0 : sigma * stream().gaussian(t);
    }

    std::vector<double> kicks(int steps) const {
        std::vector<double> z(static_cast<std::size_t>(steps));
        const NoiseStream s = stream();
        for (int t = 1; t <= steps; ++t)
            z[static_cast<std::size_t>(t - 1)] = sigma == 0.0 ? 0.0 : sigma * s.gaussian(static_cast<std::uint64_t>(t));
        return z;
    }
};

}  // namespace sawtooth
