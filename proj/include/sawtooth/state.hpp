#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sawtooth/fourier.hpp"
#include "sawtooth/params.hpp"

namespace sawtooth {

enum class Basis { position, momentum };

/// State vector over the centered basis: storage index i holds the amplitude
/// of the label i - N/2, with the basis recorded to prevent silent misuse.
struct QuantumState {
    std::vector<std::complex<double>> amplitudes;
    Basis basis = Basis::position;

    std::size_t size() const { return amplitudes.size(); }
    int min_index() const { return -static_cast<int>(size()) / 2; }

    std::size_t storage_index(int label) const {
        const int i = label + static_cast<int>(size()) / 2;
        if (i < 0 || i >= static_cast<int>(size()))
            throw std::out_of_range("QuantumState: centered label out of range");
        return static_cast<std::size_t>(i);
    }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

inline QuantumState momentum_eigenstate(const MapParams& params, int p0) {
    QuantumState s;
    s.amplitudes.assign(params.basis_size, {0.0, 0.0});
    s.basis = Basis::momentum;
    s.amplitudes[s.storage_index(p0)] = {1.0, 0.0};
    return s;
}

inline void to_momentum_inplace(QuantumState& s, const FourierPlan& plan) {
    if (s.basis != Basis::position)
        throw std::invalid_argument("to_momentum: state is not in the position basis");
    plan.position_to_momentum(s.amplitudes);
    s.basis = Basis::momentum;
}

inline void to_position_inplace(QuantumState& s, const FourierPlan& plan) {
    if (s.basis != Basis::momentum)
        throw std::invalid_argument("to_position: state is not in the momentum basis");
    plan.momentum_to_position(s.amplitudes);
    s.basis = Basis::position;
}

inline QuantumState to_momentum(QuantumState s, const FourierPlan& plan) {
    to_momentum_inplace(s, plan);
    return s;
}

inline QuantumState to_position(QuantumState s, const FourierPlan& plan) {
    to_position_inplace(s, plan);
    return s;
}

inline QuantumState to_momentum(QuantumState s) {
    const FourierPlan plan(s.size());
    to_momentum_inplace(s, plan);
    return s;
}

inline QuantumState to_position(QuantumState s) {
    const FourierPlan plan(s.size());
    to_position_inplace(s, plan);
    return s;
}

/// P_p = |<p|psi>|^2, indexed by storage position (label p = index - N/2).
inline std::vector<double> momentum_distribution(const QuantumState& s) {
    QuantumState tmp = s;
    if (tmp.basis == Basis::position) to_momentum_inplace(tmp, FourierPlan(tmp.size()));
    std::vector<double> p(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) p[i] = std::norm(tmp.amplitudes[i]);
    return p;
}

}  // namespace sawtooth
