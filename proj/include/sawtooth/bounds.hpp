#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sawtooth/classical.hpp"

namespace sawtooth {

// Closed-form bounds on where noisy fidelity decay can run at the classical
// Lyapunov rate, and the triangular feasible region they cut out of the
// (lambda, Gamma_0) plane:
//   (1) Gamma_0 >= lambda            (golden-rule decay must not be slower)
//   (2) lambda >= lambda_loc         (dynamics must stay diffusive)
//   (3) Gamma_0 <= (ln(N/a_late) - t_lyap lambda) / t_early
//                                    (early and late decay must not squeeze
//                                     out the intermediate steps)

struct BoundConstants {
    double a_late = 2.0;   // late-time decay sets in near a_late / N
    double t_lyap = 2.0;   // required clean Lyapunov-rate steps
    double t_early = 2.0;  // empirical duration of the early-time decay
};

enum class LocMethod { exact, series3 };

struct LocalizationThreshold {
    double kick_classical = 0.0;  // K_loc
    double kick_quantum = 0.0;    // k_loc
    bool strong_kick_branch = false;
    bool consistent = true;  // the selected branch's validity range contains the value
};

/// Kick threshold below which dynamical localization wins. The strong-kick
/// form 4.16 L N^{-1/2} applies when its value exceeds 1, otherwise the
/// cantori form 3.12 L^{4/5} N^{-2/5}.
inline LocalizationThreshold localization_threshold(std::size_t basis_size, int winding) {
    if (basis_size < 4) throw std::invalid_argument("localization_threshold: basis size must be >= 4");
    if (winding < 1) throw std::invalid_argument("localization_threshold: winding must be >= 1");
    const double n = static_cast<double>(basis_size);
    const double l = static_cast<double>(winding);
    LocalizationThreshold out;
    const double strong = 4.16 * l / std::sqrt(n);
    if (strong > 1.0) {
        out.kick_classical = strong;
        out.strong_kick_branch = true;
        out.consistent = true;
    } else {
        out.kick_classical = 3.12 * std::pow(l, 0.8) * std::pow(n, -0.4);
        out.strong_kick_branch = false;
        out.consistent = out.kick_classical < 1.0;
    }
    const double hbar = 2.0 * std::numbers::pi * l / n;
    out.kick_quantum = out.kick_classical / hbar;
    return out;
}

/// Lyapunov rate at the localization threshold. exact composes the threshold
/// into the closed-form lambda(K); series3 is its three-term weak-kick
/// expansion 1.77 L^{2/5} N^{-1/5} - 0.23 L^{6/5} N^{-3/5} + 2.43 L^{8/5} N^{-4/5}.
inline double lambda_loc(std::size_t basis_size, int winding, LocMethod method) {
    if (method == LocMethod::exact)
        return lyapunov_exponent(localization_threshold(basis_size, winding).kick_classical);
    const double n = static_cast<double>(basis_size);
    const double l = static_cast<double>(winding);
    return 1.77 * std::pow(l, 0.4) * std::pow(n, -0.2) -
           0.23 * std::pow(l, 1.2) * std::pow(n, -0.6) +
           2.43 * std::pow(l, 1.6) * std::pow(n, -0.8);
}

/// Bound (3): largest admissible initial decay rate at a given lambda. May
/// be negative, meaning the bound cannot be met at any noise level.
inline double gamma0_max(std::size_t basis_size, double lambda, BoundConstants c = {}) {
    if (basis_size < 2) throw std::invalid_argument("gamma0_max: basis size must be >= 2");
    return (std::log(static_cast<double>(basis_size) / c.a_late) - c.t_lyap * lambda) / c.t_early;
}

struct RegimePoint {
    double lambda = 0.0;
    double gamma0 = 0.0;
};

struct RegimeBounds {
    int qubits = 0;
    std::size_t basis_size = 0;
    int winding = 1;
    LocMethod method = LocMethod::exact;
    BoundConstants constants;
    double kick_loc = 0.0;            // K_loc
    double lambda_loc_exact = 0.0;
    double lambda_loc_series3 = 0.0;
    double lambda_star = 0.0;         // rightmost corner, bounds (1) and (3) meeting
    double gamma0_max_at_loc = 0.0;   // bound (3) evaluated at the method's lambda_loc
    bool nonempty = false;
    std::array<RegimePoint, 3> vertices{};  // meaningful only when nonempty
    double area = 0.0;

    double lambda_loc_selected() const {
        return method == LocMethod::exact ? lambda_loc_exact : lambda_loc_series3;
    }
};

inline RegimeBounds lyapunov_region(int qubits, int winding, LocMethod method,
                                    BoundConstants c = {}) {
    if (qubits < 2) throw std::invalid_argument("lyapunov_region: needs at least 2 qubits");
    RegimeBounds r;
    r.qubits = qubits;
    r.basis_size = std::size_t{1} << qubits;
    r.winding = winding;
    r.method = method;
    r.constants = c;
    r.kick_loc = localization_threshold(r.basis_size, winding).kick_classical;
    r.lambda_loc_exact = lambda_loc(r.basis_size, winding, LocMethod::exact);
    r.lambda_loc_series3 = lambda_loc(r.basis_size, winding, LocMethod::series3);
    r.lambda_star = std::log(static_cast<double>(r.basis_size) / c.a_late) / (c.t_early + c.t_lyap);
    const double ll = r.lambda_loc_selected();
    r.gamma0_max_at_loc = gamma0_max(r.basis_size, ll, c);
    r.nonempty = ll < r.lambda_star;
    if (r.nonempty) {
        r.vertices[0] = {ll, ll};                                    // bounds (1) and (2)
        r.vertices[1] = {ll, r.gamma0_max_at_loc};                   // bounds (2) and (3)
        r.vertices[2] = {r.lambda_star, r.lambda_star};              // bounds (1) and (3)
        const auto& v = r.vertices;
        r.area = 0.5 * std::abs((v[1].lambda - v[0].lambda) * (v[2].gamma0 - v[0].gamma0) -
                                (v[2].lambda - v[0].lambda) * (v[1].gamma0 - v[0].gamma0));
    }
    return r;
}

/// Membership is exactly the conjunction of the three bound inequalities.
inline bool region_contains(const RegimeBounds& r, double lambda, double gamma0,
                            double tolerance = 0.0) {
    return lambda >= r.lambda_loc_selected() - tolerance && gamma0 >= lambda - tolerance &&
           gamma0 <= gamma0_max(r.basis_size, lambda, r.constants) + tolerance;
}

struct MinQubitsReport {
    int n_min = -1;  // -1: no nonempty region up to max_qubits
    int max_qubits = 20;
    std::vector<RegimeBounds> table;
};

inline MinQubitsReport min_qubits(int winding, LocMethod method, int max_qubits = 20,
                                  BoundConstants c = {}) {
    if (winding < 1) throw std::invalid_argument("min_qubits: winding must be >= 1");
    MinQubitsReport report;
    report.max_qubits = max_qubits;
    for (int n = 2; n <= max_qubits; ++n) {
        report.table.push_back(lyapunov_region(n, winding, method, c));
        if (report.n_min < 0 && report.table.back().nonempty) report.n_min = n;
    }
    return report;
}

}  // namespace sawtooth
