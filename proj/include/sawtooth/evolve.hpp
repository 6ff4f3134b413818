#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sawtooth/fourier.hpp"
#include "sawtooth/parallel.hpp"
#include "sawtooth/params.hpp"
#include "sawtooth/rng.hpp"
#include "sawtooth/state.hpp"
#include "sawtooth/stats.hpp"

namespace sawtooth {

/// One-period split-operator propagator: a kick phase diagonal in position,
/// exp(+i (k + zeta) (beta q)^2 / 2), followed by the free phase diagonal in
/// momentum, exp(-i hbar p^2 / 2). Steps map position basis to position
/// basis; per-step kick noise zeta is supplied by the caller.
class QsmEngine {
public:
    explicit QsmEngine(const MapParams& params)
        : params_(params), plan_(params.basis_size) {
        const std::size_t n = params.basis_size;
        kick_phase_unit_.resize(n);
        kinetic_phase_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double label = static_cast<double>(static_cast<int>(i) - static_cast<int>(n) / 2);
            const double x = params.beta() * label;
            kick_phase_unit_[i] = 0.5 * x * x;
            const double arg = -0.5 * params.hbar * label * label;
            kinetic_phase_[i] = {std::cos(arg), std::sin(arg)};
        }
    }

    const MapParams& params() const { return params_; }
    const FourierPlan& plan() const { return plan_; }

    void step(QuantumState& s, double kick_noise) const {
        apply_kick(s, kick_noise, /*inverse=*/false);
        to_momentum_inplace(s, plan_);
        for (std::size_t i = 0; i < s.size(); ++i) s.amplitudes[i] *= kinetic_phase_[i];
        to_position_inplace(s, plan_);
    }

    /// Exact inverse of step() for the same kick noise.
    void step_inverse(QuantumState& s, double kick_noise) const {
        to_momentum_inplace(s, plan_);
        for (std::size_t i = 0; i < s.size(); ++i) s.amplitudes[i] *= std::conj(kinetic_phase_[i]);
        to_position_inplace(s, plan_);
        apply_kick(s, kick_noise, /*inverse=*/true);
    }

private:
    void apply_kick(QuantumState& s, double kick_noise, bool inverse) const {
        if (s.basis != Basis::position)
            throw std::invalid_argument("QsmEngine: step requires the position basis");
        if (s.size() != params_.basis_size)
            throw std::invalid_argument("QsmEngine: state size mismatch");
        double kick = params_.kick_quantum + kick_noise;
        if (inverse) kick = -kick;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double arg = kick * kick_phase_unit_[i];
            s.amplitudes[i] *= std::complex<double>{std::cos(arg), std::sin(arg)};
        }
    }

    MapParams params_;
    FourierPlan plan_;
    std::vector<double> kick_phase_unit_;
    std::vector<std::complex<double>> kinetic_phase_;
};

/// Single-step convenience wrapper.
inline QuantumState qsm_step(QuantumState s, const MapParams& params, double kick_noise) {
    QsmEngine engine(params);
    if (s.basis == Basis::momentum) to_position_inplace(s, engine.plan());
    engine.step(s, kick_noise);
    return s;
}

/// Ensemble-averaged two-branch fidelity f(t) with per-step statistics.
struct FidelityTrace {
    std::vector<double> f_mean;       // index = t, f_mean[0] == 1
    std::vector<double> f_std_error;  // standard error of each mean
    std::size_t realizations = 0;
    MapParams params;
    double sigma = 0.0;
    std::uint64_t master_seed = 0;
    int initial_momentum = 0;

    int steps() const { return static_cast<int>(f_mean.size()) - 1; }
};

/// Two-way noisy fidelity: both branches evolve forward from |p0> under
/// independent per-step kick noise and f(t) = |<chi(t)|phi(t)>|^2 is
/// recorded. This equals the echo overlap |<psi|U_B^-t U_A^t|psi>|^2 but
/// costs one pass instead of t inversions per point. Realizations run in
/// parallel; the reduction order is fixed, so f_mean is bit-identical for
/// any thread count.
inline FidelityTrace echo_fidelity_trace(const MapParams& params, double sigma, int steps,
                                         std::size_t realizations, std::uint64_t master_seed,
                                         int initial_momentum = 0, unsigned threads = 0) {
    if (steps < 1) throw std::invalid_argument("echo_fidelity_trace: steps must be >= 1");
    if (realizations < 1) throw std::invalid_argument("echo_fidelity_trace: needs at least one realization");
    if (sigma < 0.0) throw std::invalid_argument("echo_fidelity_trace: sigma must be >= 0");

    const QsmEngine engine(params);
    const std::size_t t_count = static_cast<std::size_t>(steps) + 1;
    std::vector<double> table(realizations * t_count);

    parallel_for(
        realizations,
        [&](std::size_t r) {
            const NoisePlan plan_a{sigma, master_seed, r, Branch::forward};
            const NoisePlan plan_b{sigma, master_seed, r, Branch::backward};
            const NoiseStream noise_a = plan_a.stream();
            const NoiseStream noise_b = plan_b.stream();
            QuantumState phi = momentum_eigenstate(params, initial_momentum);
            to_position_inplace(phi, engine.plan());
            QuantumState chi = phi;
            double* row = table.data() + r * t_count;
            row[0] = 1.0;  // identical branches before any evolution
            for (int t = 1; t <= steps; ++t) {
                const double za = sigma == 0.0 ? 0.0 : sigma * noise_a.gaussian(static_cast<std::uint64_t>(t));
                const double zb = sigma == 0.0 ? 0.0 : sigma * noise_b.gaussian(static_cast<std::uint64_t>(t));
                engine.step(phi, za);
                engine.step(chi, zb);
                std::complex<double> overlap{0.0, 0.0};
                for (std::size_t i = 0; i < phi.size(); ++i)
                    overlap += std::conj(chi.amplitudes[i]) * phi.amplitudes[i];
                row[t] = std::norm(overlap);
            }
        },
        threads);

    FidelityTrace trace;
    trace.f_mean.resize(t_count);
    trace.f_std_error.resize(t_count);
    trace.realizations = realizations;
    trace.params = params;
    trace.sigma = sigma;
    trace.master_seed = master_seed;
    trace.initial_momentum = initial_momentum;
    std::vector<double> column(realizations);
    for (std::size_t t = 0; t < t_count; ++t) {
        for (std::size_t r = 0; r < realizations; ++r) column[r] = table[r * t_count + t];
        const MeanStdError ms = mean_and_std_error(column);
        trace.f_mean[t] = ms.mean;
        trace.f_std_error[t] = ms.std_error;
    }
    trace.f_mean[0] = 1.0;
    trace.f_std_error[0] = 0.0;
    return trace;
}

/// Momentum distribution of the noiseless map averaged over
/// t in [t_begin, t_end], starting from |p0>.
inline std::vector<double> time_averaged_momentum_distribution(const MapParams& params,
                                                               int initial_momentum,
                                                               long t_begin, long t_end) {
    if (t_begin < 1 || t_end < t_begin)
        throw std::invalid_argument("time_averaged_momentum_distribution: bad window");
    const QsmEngine engine(params);
    QuantumState s = momentum_eigenstate(params, initial_momentum);
    to_position_inplace(s, engine.plan());
    std::vector<double> acc(params.basis_size, 0.0);
    for (long t = 1; t <= t_end; ++t) {
        engine.step(s, 0.0);
        if (t >= t_begin) {
            QuantumState m = to_momentum(s, engine.plan());
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(m.amplitudes[i]);
        }
    }
    const double count = static_cast<double>(t_end - t_begin + 1);
    for (double& v : acc) v /= count;
    return acc;
}

}  // namespace sawtooth
