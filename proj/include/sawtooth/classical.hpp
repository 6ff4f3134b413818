#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "sawtooth/parallel.hpp"
#include "sawtooth/rng.hpp"
#include "sawtooth/stats.hpp"

namespace sawtooth {

// Classical sawtooth map on action-angle variables:
//   J' = J + (K + zeta) * theta   (mod 2*pi*L on the torus)
//   theta' = theta + J'           (mod 2*pi)
// Chaotic for K > 0; fully regular for -4 < K < 0.

enum class Manifold { torus, cylinder };

struct ClassicalState {
    double action = 0.0;  // J, wrapped to [-pi*L, pi*L) on the torus
    double angle = 0.0;   // theta, wrapped to [-pi, pi)
};

/// Maps x into [-period/2, period/2).
inline double wrap_centered(double x, double period) {
    double r = x - period * std::floor(x / period + 0.5);
    if (r < -0.5 * period) r += period;
    if (r >= 0.5 * period) r -= period;
    return r;
}

inline ClassicalState csm_step(ClassicalState s, double kick, int winding, double kick_noise,
                               Manifold manifold) {
    const double two_pi = 2.0 * std::numbers::pi;
    double action = s.action + (kick + kick_noise) * s.angle;
    if (manifold == Manifold::torus) action = wrap_centered(action, two_pi * winding);
    const double angle = wrap_centered(s.angle + action, two_pi);
    return ClassicalState{action, angle};
}

/// Maximal Lyapunov exponent of the chaotic branch (K > 0):
/// lambda = ln[(2 + K + sqrt(K^2 + 4K)) / 2].
inline double lyapunov_exponent(double kick) {
    if (kick <= 0.0) throw std::domain_error("lyapunov_exponent: requires K > 0");
    return std::log((2.0 + kick + std::sqrt(kick * kick + 4.0 * kick)) / 2.0);
}

/// Action diffusion coefficient. Random-phase value (pi^2/3) K^2 for K > 1;
/// cantori-slowed 3.3 K^{5/2} for 0 < K < 1. The branch point K = 1 is
/// assigned to the first form (the two differ by 0.4% there).
inline double diffusion_coefficient(double kick) {
    if (kick <= 0.0) throw std::domain_error("diffusion_coefficient: requires K > 0");
    const double pi2_3 = std::numbers::pi * std::numbers::pi / 3.0;
    if (kick >= 1.0) return pi2_3 * kick * kick;
    return 3.3 * std::pow(kick, 2.5);
}

struct ChaosMetrics {
    double lyapunov = 0.0;
    double diffusion = 0.0;
};

inline ChaosMetrics chaos_metrics(double kick) {
    return ChaosMetrics{lyapunov_exponent(kick), diffusion_coefficient(kick)};
}

namespace detail {
inline constexpr std::uint64_t kAngleSalt = 0x616e676cULL;  // "angl"
inline constexpr std::uint64_t kKickSalt = 0x6b69636bULL;   // "kick"

inline double initial_angle(std::uint64_t seed, std::uint64_t member) {
    const double u = NoiseStream(seed, member, kAngleSalt).uniform(0);
    return -std::numbers::pi + 2.0 * std::numbers::pi * u;
}
}  // namespace detail

/// Fixed-cardinality set of trajectories evolved under a shared kick with
/// independent per-member, per-step noise. Members start at J = 0 with
/// angles uniform on [-pi, pi), each derived from (rng_seed, member index).
class ClassicalEnsemble {
public:
    ClassicalEnsemble(std::size_t members, double kick, int winding, std::uint64_t rng_seed)
        : kick_(kick), winding_(winding), rng_seed_(rng_seed), states_(members) {
        if (members == 0) throw std::invalid_argument("ClassicalEnsemble: needs at least one member");
        for (std::size_t m = 0; m < members; ++m)
            states_[m].angle = detail::initial_angle(rng_seed_, m);
    }

    void advance(double noise_sigma, Manifold manifold) {
        ++step_;
        for (std::size_t m = 0; m < states_.size(); ++m) {
            const double zeta =
                noise_sigma == 0.0
                    ? 0.0
                    : noise_sigma * NoiseStream(rng_seed_, m, detail::kKickSalt).gaussian(step_);
            states_[m] = csm_step(states_[m], kick_, winding_, zeta, manifold);
        }
    }

    const std::vector<ClassicalState>& states() const { return states_; }
    std::uint64_t step_count() const { return step_; }
    double kick() const { return kick_; }
    int winding() const { return winding_; }

private:
    double kick_;
    int winding_;
    std::uint64_t rng_seed_;
    std::uint64_t step_ = 0;
    std::vector<ClassicalState> states_;
};

struct DiffusionSeries {
    std::vector<double> msd_mean;       // <(J_t - J_0)^2>, index = t, msd_mean[0] = 0
    std::vector<double> msd_std_error;  // standard error of each mean
    double coefficient = 0.0;           // least-squares slope over t in [T/2, T]
    double coefficient_std_error = 0.0;
    std::size_t ensemble_size = 0;
    std::uint64_t seed = 0;
};

/// Measures the action diffusion rate on the cylinder (J unwrapped; a torus
/// would saturate). Initial ensemble: theta uniform on [-pi, pi), J = 0.
/// The slope is fit over the second half of the run to skip the transient.
inline DiffusionSeries measure_diffusion(double kick, double noise_sigma, std::size_t ensemble,
                                         int steps, std::uint64_t seed, unsigned threads = 0) {
    if (ensemble < 100) throw std::invalid_argument("measure_diffusion: ensemble < 100 is statistically meaningless");
    if (steps < 10) throw std::invalid_argument("measure_diffusion: needs at least 10 steps");

    const std::size_t t_count = static_cast<std::size_t>(steps) + 1;
    // Fixed-size chunks keep the accumulation order independent of threading.
    const std::size_t chunk_size = 1024;
    const std::size_t chunks = (ensemble + chunk_size - 1) / chunk_size;
    std::vector<std::vector<double>> sum1(chunks, std::vector<double>(t_count, 0.0));
    std::vector<std::vector<double>> sum2(chunks, std::vector<double>(t_count, 0.0));

    parallel_for(
        chunks,
        [&](std::size_t c) {
            const std::size_t begin = c * chunk_size;
            const std::size_t end = std::min(begin + chunk_size, ensemble);
            for (std::size_t m = begin; m < end; ++m) {
                ClassicalState s{0.0, detail::initial_angle(seed, m)};
                const NoiseStream noise(seed, m, detail::kKickSalt);
                for (int t = 1; t <= steps; ++t) {
                    const double zeta = noise_sigma == 0.0
                                            ? 0.0
                                            : noise_sigma * noise.gaussian(static_cast<std::uint64_t>(t));
                    s = csm_step(s, kick, 1, zeta, Manifold::cylinder);
                    const double d2 = s.action * s.action;
                    sum1[c][static_cast<std::size_t>(t)] += d2;
                    sum2[c][static_cast<std::size_t>(t)] += d2 * d2;
                }
            }
        },
        threads);

    DiffusionSeries out;
    out.msd_mean.assign(t_count, 0.0);
    out.msd_std_error.assign(t_count, 0.0);
    out.ensemble_size = ensemble;
    out.seed = seed;
    const double n = static_cast<double>(ensemble);
    for (std::size_t t = 1; t < t_count; ++t) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) {
            s1 += sum1[c][t];
            s2 += sum2[c][t];
        }
        const double mean = s1 / n;
        const double var = std::max(0.0, s2 / n - mean * mean);
        out.msd_mean[t] = mean;
        out.msd_std_error[t] = std::sqrt(var / (n - 1.0));
    }

    std::vector<double> xs, ys, se;
    for (int t = steps / 2; t <= steps; ++t) {
        xs.push_back(static_cast<double>(t));
        ys.push_back(out.msd_mean[static_cast<std::size_t>(t)]);
        se.push_back(out.msd_std_error[static_cast<std::size_t>(t)]);
    }
    const LineFit fit = fit_line(xs, ys);
    out.coefficient = fit.slope;
    // Propagate the per-point standard errors through the OLS slope weights.
    const double xbar = pairwise_sum(xs) / static_cast<double>(xs.size());
    double sxx = 0.0;
    for (double x : xs) sxx += (x - xbar) * (x - xbar);
    double var_slope = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = (xs[i] - xbar) / sxx;
        var_slope += w * w * se[i] * se[i];
    }
    out.coefficient_std_error = std::sqrt(var_slope);
    return out;
}

}  // namespace sawtooth
