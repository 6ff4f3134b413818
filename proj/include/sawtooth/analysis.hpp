#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "sawtooth/classical.hpp"
#include "sawtooth/evolve.hpp"
#include "sawtooth/params.hpp"
#include "sawtooth/stats.hpp"

namespace sawtooth {

// Rate extraction from fidelity traces. Missing or clipped points are
// carried as NaN and excluded from fits, never imputed.

struct UnderconstrainedFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gamma_0 = -(ln f(1) - ln f(0)).
inline double initial_decay_rate(std::span<const double> f) {
    if (f.size() < 2) throw std::invalid_argument("initial_decay_rate: trace needs t = 0 and t = 1");
    if (!(f[1] > 0.0))
        throw std::runtime_error(
            "initial_decay_rate: f(1) <= 0 (uniform-limit floor breached; unfold or add realizations)");
    return -(std::log(f[1]) - std::log(f[0]));
}

inline double initial_decay_rate(const FidelityTrace& t) { return initial_decay_rate(t.f_mean); }

/// gamma(t) = -(ln f(t+1) - ln f(t)) for each consecutive pair; entries with
/// a nonpositive fidelity on either side are NaN.
inline std::vector<double> stepwise_rates(std::span<const double> f) {
    if (f.size() < 2) throw std::invalid_argument("stepwise_rates: trace too short");
    std::vector<double> g(f.size() - 1, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = 0; t + 1 < f.size(); ++t)
        if (f[t] > 0.0 && f[t + 1] > 0.0) g[t] = -(std::log(f[t + 1]) - std::log(f[t]));
    return g;
}

inline std::vector<double> stepwise_rates(const FidelityTrace& t) { return stepwise_rates(t.f_mean); }

/// Removes the uniform-mixing floor: f' = N/(N-1) (f - 1/N). Values that do
/// not stay positive are clipped to NaN.
inline std::vector<double> unfold(std::span<const double> f, std::size_t basis_size) {
    if (basis_size < 2) throw std::invalid_argument("unfold: basis size must be >= 2");
    const double n = static_cast<double>(basis_size);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = n / (n - 1.0) * (f[i] - 1.0 / n);
        out[i] = v > 0.0 ? v : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

inline std::vector<double> unfold(const FidelityTrace& t) { return unfold(t.f_mean, t.params.basis_size); }

struct RateFit {
    double gamma = 0.0;
    double t0 = 0.0;
    std::size_t points = 0;
    double residual_rms = 0.0;
    std::vector<int> window;  // step indices used
};

/// Least-squares fit of ln f to -gamma (t - t0) over the intermediate-time
/// window t >= 2, f(t) > 2/N. With use_unfolded the unfolded values are fit
/// instead, over the same window.
inline RateFit fit_intermediate_rate(std::span<const double> f, std::size_t basis_size,
                                     bool use_unfolded = false) {
    if (basis_size < 2) throw std::invalid_argument("fit_intermediate_rate: basis size must be >= 2");
    const double cut = 2.0 / static_cast<double>(basis_size);
    std::vector<double> values(f.begin(), f.end());
    if (use_unfolded) values = unfold(f, basis_size);
    std::vector<double> xs, ys;
    std::vector<int> window;
    for (std::size_t t = 2; t < f.size(); ++t) {
        if (!(f[t] > cut)) continue;
        if (std::isnan(values[t])) continue;
        xs.push_back(static_cast<double>(t));
        ys.push_back(std::log(values[t]));
        window.push_back(static_cast<int>(t));
    }
    if (xs.size() < 2)
        throw UnderconstrainedFit("fit_intermediate_rate: fewer than two points satisfy t >= 2, f > 2/N");
    const LineFit line = fit_line(xs, ys);
    RateFit fit;
    fit.gamma = -line.slope;
    fit.t0 = fit.gamma != 0.0 ? line.intercept / fit.gamma : 0.0;
    fit.points = xs.size();
    fit.residual_rms = line.residual_rms;
    fit.window = std::move(window);
    return fit;
}

inline RateFit fit_intermediate_rate(const FidelityTrace& t, bool use_unfolded = false) {
    return fit_intermediate_rate(t.f_mean, t.params.basis_size, use_unfolded);
}

/// Dynamical localization length from the diffusion estimate, ell = D_K / hbar^2.
inline double localization_length_theory(const MapParams& params) {
    return diffusion_coefficient(params.kick_classical) / (params.hbar * params.hbar);
}

struct LocalizationEstimate {
    double ell_theory = 0.0;
    double tau_heisenberg = 0.0;  // ~ ell
    double ell_fit = 0.0;
};

struct ProfileFit {
    double ell = 0.0;
    double slope = 0.0;
    std::size_t bins = 0;
    bool delocalized = false;
};

/// Fits ln P_p against |p - p0| over bins with P_p > 1e-6; for an
/// exponential profile exp(-2|p - p0|/ell) the slope is -2/ell. A
/// non-negative slope reports a delocalized state with infinite length.
inline ProfileFit fit_localization_length(std::span<const double> momentum_probability, int p0) {
    const int n = static_cast<int>(momentum_probability.size());
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
        const double p = momentum_probability[static_cast<std::size_t>(i)];
        if (!(p > 1e-6)) continue;
        const int label = i - n / 2;
        xs.push_back(std::abs(static_cast<double>(label - p0)));
        ys.push_back(std::log(p));
    }
    if (xs.size() < 2) throw std::invalid_argument("fit_localization_length: fewer than two usable bins");
    const LineFit line = fit_line(xs, ys);
    ProfileFit fit;
    fit.slope = line.slope;
    fit.bins = xs.size();
    if (line.slope >= 0.0) {
        fit.delocalized = true;
        fit.ell = std::numeric_limits<double>::infinity();
    } else {
        fit.ell = -2.0 / line.slope;
    }
    return fit;
}

}  // namespace sawtooth
