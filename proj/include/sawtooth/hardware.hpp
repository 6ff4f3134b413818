#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sawtooth/bounds.hpp"

namespace sawtooth {

// Translates simulated decay rates into per-two-qubit-gate error budgets.
// Every device constant lives in a profile data file; the code only encodes
// the factor structure r = a_decay * b_depth * c_crosstalk.

enum class ScenarioKind { best, worst };

inline ScenarioKind scenario_from_string(const std::string& s) {
    if (s == "best") return ScenarioKind::best;
    if (s == "worst") return ScenarioKind::worst;
    throw std::invalid_argument("unknown scenario name: " + s);
}

enum class CrosstalkScaling { constant, fully_connected };

struct HardwareScenario {
    double gamma0_ref = 0.0;      // baseline initial decay rate at n_ref
    double gate_depth_at6 = 0.0;  // depth reduction factor anchored at n = 6
    double gate_depth_exponent = 0.0;
    double crosstalk_at6 = 0.0;
    CrosstalkScaling crosstalk_scaling = CrosstalkScaling::constant;
    std::string descriptor;  // connectivity / parallelization assumptions
};

struct HardwareProfile {
    std::string name;
    int n_ref = 0;
    double eps_reported = 0.0;  // vendor-reported two-qubit gate error
    HardwareScenario best;
    HardwareScenario worst;
    double current_depth_exponent = 0.0;  // gate-depth growth of today's hardware
    bool current_parallel_half_n = false;  // n/2 parallelization credit above n_ref

    const HardwareScenario& scenario(ScenarioKind k) const {
        return k == ScenarioKind::best ? best : worst;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct ProfileKeys {
    std::map<std::string, std::string> kv;
    std::string origin;

    std::string take(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error("profile " + origin + ": missing key '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    }

    std::optional<std::string> take_optional(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    }

    double number(const std::string& key) {
        const std::string v = take(key);
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw std::runtime_error("profile " + origin + ": key '" + key + "' is not a number: " + v);
        }
    }
};

inline HardwareScenario parse_scenario(ProfileKeys& keys, const std::string& tag) {
    HardwareScenario s;
    if (auto direct = keys.take_optional("gamma0_ref_" + tag)) {
        try {
            s.gamma0_ref = std::stod(*direct);
        } catch (const std::exception&) {
            throw std::runtime_error("profile " + keys.origin + ": key 'gamma0_ref_" + tag +
                                     "' is not a number: " + *direct);
        }
    } else if (keys.kv.count("eps_effective_" + tag) && keys.kv.count("gate_count_ref")) {
        const double eps = keys.number("eps_effective_" + tag);
        const std::string gates = keys.kv.at("gate_count_ref");
        s.gamma0_ref = eps * std::stod(gates);
    } else {
        throw std::runtime_error("profile " + keys.origin + ": missing key 'gamma0_ref_" + tag +
                                 "' (or 'eps_effective_" + tag + "' plus 'gate_count_ref')");
    }
    s.gate_depth_at6 = keys.number("gate_depth_" + tag + "_at6");
    s.gate_depth_exponent = keys.number("gate_depth_" + tag + "_exponent");
    s.crosstalk_at6 = keys.number("crosstalk_" + tag + "_at6");
    const std::string scaling = keys.take("crosstalk_" + tag + "_scaling");
    if (scaling == "constant")
        s.crosstalk_scaling = CrosstalkScaling::constant;
    else if (scaling == "fully_connected")
        s.crosstalk_scaling = CrosstalkScaling::fully_connected;
    else
        throw std::runtime_error("profile " + keys.origin + ": key 'crosstalk_" + tag +
                                 "_scaling' must be 'constant' or 'fully_connected', got: " + scaling);
    if (auto d = keys.take_optional("scenario_" + tag)) s.descriptor = *d;
    return s;
}

}  // namespace detail

inline HardwareProfile parse_profile(std::istream& in, const std::string& origin) {
    detail::ProfileKeys keys;
    keys.origin = origin;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("profile " + origin + ": line " + std::to_string(line_no) +
                                     " is not a key = value pair");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("profile " + origin + ": line " + std::to_string(line_no) +
                                     " has an empty key");
        if (!keys.kv.emplace(key, value).second)
            throw std::runtime_error("profile " + origin + ": duplicate key '" + key + "'");
    }

    HardwareProfile p;
    p.name = keys.take("name");
    p.n_ref = static_cast<int>(keys.number("n_ref"));
    if (p.n_ref < 1) throw std::runtime_error("profile " + origin + ": key 'n_ref' must be >= 1");
    p.eps_reported = keys.number("eps_reported");
    p.best = detail::parse_scenario(keys, "best");
    p.worst = detail::parse_scenario(keys, "worst");
    p.current_depth_exponent = keys.number("current_depth_exponent");
    const std::string parallel = keys.take("current_parallel");
    if (parallel == "half_n")
        p.current_parallel_half_n = true;
    else if (parallel == "none")
        p.current_parallel_half_n = false;
    else
        throw std::runtime_error("profile " + origin +
                                 ": key 'current_parallel' must be 'none' or 'half_n', got: " + parallel);
    keys.take_optional("gate_count_ref");
    if (!keys.kv.empty())
        throw std::runtime_error("profile " + origin + ": unknown key '" + keys.kv.begin()->first + "'");
    return p;
}

inline HardwareProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("profile " + path + ": cannot open file");
    return parse_profile(in, path);
}

struct EpsilonEstimate {
    double epsilon = 0.0;     // 1 - exp(-Gamma0 / G)
    double linearized = 0.0;  // Gamma0 / G
};

/// Per-gate error implied by a one-step decay rate over G two-qubit gates,
/// from f(1) = exp(-Gamma0) = (1 - eps)^G.
inline EpsilonEstimate epsilon_from_gamma0(double gamma0, double gate_depth) {
    if (gate_depth < 1.0) throw std::invalid_argument("epsilon_from_gamma0: gate depth must be >= 1");
    if (gamma0 < 0.0) throw std::invalid_argument("epsilon_from_gamma0: Gamma0 must be >= 0");
    return EpsilonEstimate{1.0 - std::exp(-gamma0 / gate_depth), gamma0 / gate_depth};
}

/// Effective per-gate error explaining an observed fidelity shortfall:
/// solves f_pred / f_obs = ((1 - eps_reported) / (1 - eps_eff))^gates.
inline double infer_effective_error(double f_pred, double f_obs, int gates, double eps_reported) {
    if (gates < 1) throw std::invalid_argument("infer_effective_error: gate count must be >= 1");
    if (!(f_obs > 0.0) || f_pred > 1.0)
        throw std::invalid_argument("infer_effective_error: fidelities must be in (0, 1]");
    if (f_obs > f_pred)
        throw std::invalid_argument("infer_effective_error: observed fidelity exceeds prediction; no excess error to infer");
    return 1.0 - (1.0 - eps_reported) * std::pow(f_obs / f_pred, 1.0 / gates);
}

/// Gate-depth reduction factor, power-law scaled from the n = 6 anchor.
inline double b_depth(int n, const HardwareProfile& p, ScenarioKind kind) {
    if (n < 6) throw std::invalid_argument("b_depth: defined for n >= 6");
    const HardwareScenario& s = p.scenario(kind);
    return s.gate_depth_at6 * std::pow(static_cast<double>(n) / 6.0, s.gate_depth_exponent);
}

/// Crosstalk reduction factor: constant per gate on fixed-neighbor
/// topologies, (n - 2)/4 growth relative to n = 6 when fully connected.
inline double c_crosstalk(int n, const HardwareProfile& p, ScenarioKind kind) {
    if (n < 6) throw std::invalid_argument("c_crosstalk: defined for n >= 6");
    const HardwareScenario& s = p.scenario(kind);
    if (s.crosstalk_scaling == CrosstalkScaling::constant) return s.crosstalk_at6;
    return s.crosstalk_at6 * (static_cast<double>(n) - 2.0) / 4.0;
}

/// Decay-rate reduction factor: baseline Gamma0 over the largest admissible
/// Gamma0 at n qubits (bound (3) at the localization corner, L = 1).
inline double a_decay(int n, const HardwareProfile& p, ScenarioKind kind,
                      LocMethod method = LocMethod::series3) {
    if (n < 6) throw std::invalid_argument("a_decay: defined for n >= 6");
    const double cap = lyapunov_region(n, 1, method).gamma0_max_at_loc;
    if (cap <= 0.0) throw std::runtime_error("a_decay: admissible Gamma0 is not positive at this n");
    return p.scenario(kind).gamma0_ref / cap;
}

struct ReductionReport {
    int n = 0;
    double a_best = 0.0, a_worst = 0.0;
    double b_best = 0.0, b_worst = 0.0;
    double c_best = 0.0, c_worst = 0.0;
    double r_best = 0.0, r_worst = 0.0;
};

/// r = a_decay * b_depth * c_crosstalk, componentwise per scenario.
inline ReductionReport reduction_factor(int n, const HardwareProfile& p,
                                        LocMethod method = LocMethod::series3) {
    ReductionReport r;
    r.n = n;
    r.a_best = a_decay(n, p, ScenarioKind::best, method);
    r.a_worst = a_decay(n, p, ScenarioKind::worst, method);
    r.b_best = b_depth(n, p, ScenarioKind::best);
    r.b_worst = b_depth(n, p, ScenarioKind::worst);
    r.c_best = c_crosstalk(n, p, ScenarioKind::best);
    r.c_worst = c_crosstalk(n, p, ScenarioKind::worst);
    r.r_best = r.a_best * r.b_best * r.c_best;
    r.r_worst = r.a_worst * r.b_worst * r.c_worst;
    return r;
}

struct Gamma0Range {
    double best = 0.0;
    double worst = 0.0;
};

/// Today's expected Gamma0 at n qubits: the measured baseline scaled by the
/// profile's current-hardware depth growth (with the n/2 parallelization
/// credit above n_ref when the device supports it) and unit crosstalk.
inline Gamma0Range current_gamma0_estimate(int n, const HardwareProfile& p) {
    if (n < p.n_ref) throw std::invalid_argument("current_gamma0_estimate: n below the profile's n_ref");
    double mult = std::pow(static_cast<double>(n) / p.n_ref, p.current_depth_exponent);
    if (p.current_parallel_half_n && n > p.n_ref) mult /= static_cast<double>(n) / 2.0;
    return Gamma0Range{p.best.gamma0_ref * mult, p.worst.gamma0_ref * mult};
}

}  // namespace sawtooth
