#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace sawtooth {

inline constexpr int kMaxQubits = 14;  // state vectors up to 16384 amplitudes

/// Parameters of one quantum map instance. The torus quantization ties the
/// effective Planck constant to the basis size, hbar = 2*pi*L/N, and splits
/// the classical kick K into K = k * hbar.
struct MapParams {
    int qubits = 0;
    std::size_t basis_size = 0;  // N = 2^qubits
    int winding = 1;             // L
    double hbar = 0.0;
    double kick_classical = 0.0;  // K
    double kick_quantum = 0.0;    // k
    bool cat_map = false;         // K/L integral: kick phases lose pseudorandomness
    bool even_winding = false;    // even L weakens the chaotic dynamics

    double beta() const { return 2.0 * std::numbers::pi / static_cast<double>(basis_size); }
    int min_index() const { return -static_cast<int>(basis_size) / 2; }
    int max_index() const { return static_cast<int>(basis_size) / 2 - 1; }
};

namespace detail {

inline MapParams make_params(int qubits, int winding, bool strict) {
    if (qubits < 1) throw std::invalid_argument("map params: qubit count must be >= 1");
    if (qubits > kMaxQubits) throw std::invalid_argument("map params: more than 14 qubits is unsupported");
    if (winding < 1) throw std::invalid_argument("map params: winding number L must be >= 1");
    if (strict && winding % 2 == 0)
        throw std::invalid_argument("map params: even L disrupts the chaotic dynamics (strict mode)");
    MapParams p;
    p.qubits = qubits;
    p.basis_size = std::size_t{1} << qubits;
    p.winding = winding;
    p.hbar = 2.0 * std::numbers::pi * winding / static_cast<double>(p.basis_size);
    p.even_winding = winding % 2 == 0;
    return p;
}

inline void finish_params(MapParams& p) {
    const double ratio = p.kick_classical / p.winding;
    p.cat_map = std::abs(ratio - std::round(ratio)) < 1e-9;
}

}  // namespace detail

inline MapParams params_from_classical_kick(int qubits, int winding, double kick_classical,
                                            bool strict = false) {
    if (kick_classical <= 0.0) throw std::invalid_argument("map params: kick must be > 0");
    MapParams p = detail::make_params(qubits, winding, strict);
    p.kick_classical = kick_classical;
    p.kick_quantum = kick_classical / p.hbar;
    detail::finish_params(p);
    return p;
}

inline MapParams params_from_quantum_kick(int qubits, int winding, double kick_quantum,
                                          bool strict = false) {
    if (kick_quantum <= 0.0) throw std::invalid_argument("map params: kick must be > 0");
    MapParams p = detail::make_params(qubits, winding, strict);
    p.kick_quantum = kick_quantum;
    p.kick_classical = kick_quantum * p.hbar;
    detail::finish_params(p);
    return p;
}

}  // namespace sawtooth
