#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sawtooth/evolve.hpp"
#include "sawtooth/fourier.hpp"
#include "sawtooth/params.hpp"
#include "sawtooth/rng.hpp"
#include "sawtooth/state.hpp"

using namespace sawtooth;
using Catch::Approx;

namespace {

using cvec = std::vector<std::complex<double>>;

cvec random_state(std::size_t n, std::uint64_t seed) {
    const NoiseStream stream(seed, 1, 2);
    cvec a(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = {stream.gaussian(2 * i), stream.gaussian(2 * i + 1)};
        norm += std::norm(a[i]);
    }
    for (auto& c : a) c /= std::sqrt(norm);
    return a;
}

/// Dense one-period propagator in the position basis, built from explicit
/// matrices: G = F^dagger diag(exp(-i hbar p^2/2)) F diag(exp(i(k+z)(beta q)^2/2)).
std::vector<cvec> dense_step_matrix(const MapParams& p, double zeta) {
    const int n = static_cast<int>(p.basis_size);
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(n));
    auto fourier = [&](int pp, int qq) {
        const double arg = -2.0 * std::numbers::pi * (pp - n / 2) * (qq - n / 2) / n;
        return std::complex<double>{std::cos(arg), std::sin(arg)} * inv_sqrt;
    };
    std::vector<cvec> g(n, cvec(n));
    for (int qo = 0; qo < n; ++qo) {      // output position index
        for (int qi = 0; qi < n; ++qi) {  // input position index
            const double x = p.beta() * (qi - n / 2);
            const double pot_arg = (p.kick_quantum + zeta) * 0.5 * x * x;
            const std::complex<double> pot{std::cos(pot_arg), std::sin(pot_arg)};
            std::complex<double> acc{0.0, 0.0};
            for (int pp = 0; pp < n; ++pp) {
                const double label = pp - n / 2;
                const double kin_arg = -0.5 * p.hbar * label * label;
                const std::complex<double> kin{std::cos(kin_arg), std::sin(kin_arg)};
                acc += std::conj(fourier(pp, qo)) * kin * fourier(pp, qi);
            }
            g[qo][qi] = acc * pot;
        }
    }
    return g;
}

cvec apply_dense(const std::vector<cvec>& m, const cvec& x) {
    cvec y(x.size(), {0.0, 0.0});
    for (std::size_t r = 0; r < x.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += m[r][c] * x[c];
    return y;
}

double max_deviation(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("free evolution is a pure kinetic phase on momentum eigenstates") {
    const MapParams p = params_from_quantum_kick(3, 1, 2.0);
    const QsmEngine engine(p);
    for (int p0 : {-4, -1, 0, 3}) {
        QuantumState s = momentum_eigenstate(p, p0);
        to_position_inplace(s, engine.plan());
        engine.step(s, -p.kick_quantum);  // kick used is k + zeta = 0
        to_momentum_inplace(s, engine.plan());
        const double expected_arg = -0.5 * p.hbar * p0 * p0;
        const std::complex<double> expected{std::cos(expected_arg), std::sin(expected_arg)};
        CHECK(std::abs(s.amplitudes[s.storage_index(p0)] - expected) < 1e-12);
        const std::vector<double> dist = momentum_distribution(s);
        CHECK(dist[s.storage_index(p0)] == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("steps preserve the norm") {
    const MapParams p = params_from_classical_kick(5, 1, 0.9);
    const QsmEngine engine(p);
    QuantumState s;
    s.basis = Basis::position;
    s.amplitudes = random_state(p.basis_size, 17);
    for (int t = 1; t <= 20; ++t) {
        engine.step(s, 0.4 * t);
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
    }
}

TEST_CASE("split-operator step matches the dense matrix oracle") {
    for (int qubits : {2, 3}) {
        const MapParams p = params_from_classical_kick(qubits, 1, 1.571);
        const QsmEngine engine(p);
        const NoisePlan plan{7.0, 99, 0, Branch::forward};
        const std::vector<double> zetas = plan.kicks(5);

        QuantumState fast;
        fast.basis = Basis::position;
        fast.amplitudes = random_state(p.basis_size, 50 + qubits);
        cvec dense = fast.amplitudes;
        for (double z : zetas) {
            engine.step(fast, z);
            dense = apply_dense(dense_step_matrix(p, z), dense);
            CHECK(max_deviation(fast.amplitudes, dense) < 1e-10);
        }
    }
}

TEST_CASE("qsm_step convenience wrapper matches the engine") {
    const MapParams p = params_from_classical_kick(3, 1, 0.8);
    const QsmEngine engine(p);
    QuantumState a = momentum_eigenstate(p, 1);
    to_position_inplace(a, engine.plan());
    QuantumState b = a;
    engine.step(a, 0.25);
    b = qsm_step(std::move(b), p, 0.25);
    CHECK(max_deviation(a.amplitudes, b.amplitudes) == 0.0);
}

TEST_CASE("step_inverse undoes step exactly") {
    const MapParams p = params_from_classical_kick(4, 1, 0.9);
    const QsmEngine engine(p);
    QuantumState s;
    s.basis = Basis::position;
    s.amplitudes = random_state(p.basis_size, 4);
    const cvec original = s.amplitudes;
    engine.step(s, 1.7);
    engine.step_inverse(s, 1.7);
    CHECK(max_deviation(s.amplitudes, original) < 1e-13);
}

TEST_CASE("unitarity drift after 100 steps at n = 12 stays below 1e-10") {
    const MapParams p = params_from_classical_kick(12, 1, 0.9);
    const QsmEngine engine(p);
    QuantumState s = momentum_eigenstate(p, 0);
    to_position_inplace(s, engine.plan());
    const NoisePlan plan{2.0, 11, 0, Branch::forward};
    for (int t = 1; t <= 100; ++t) engine.step(s, plan.kick(t));
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("two-branch overlap equals the literal echo overlap") {
    const MapParams p = params_from_classical_kick(3, 1, 1.2);
    const QsmEngine engine(p);
    const int steps = 5;
    const NoisePlan plan_a{3.0, 1234, 0, Branch::forward};
    const NoisePlan plan_b{3.0, 1234, 0, Branch::backward};
    const std::vector<double> za = plan_a.kicks(steps), zb = plan_b.kicks(steps);

    QuantumState psi = momentum_eigenstate(p, 0);
    to_position_inplace(psi, engine.plan());

    for (int t = 1; t <= steps; ++t) {
        QuantumState phi = psi, chi = psi;
        for (int u = 0; u < t; ++u) engine.step(phi, za[u]);
        for (int u = 0; u < t; ++u) engine.step(chi, zb[u]);
        std::complex<double> direct{0.0, 0.0};
        for (std::size_t i = 0; i < phi.size(); ++i)
            direct += std::conj(chi.amplitudes[i]) * phi.amplitudes[i];

        // Literal echo: forward under plan A, then the inverse of plan B.
        QuantumState echo = psi;
        for (int u = 0; u < t; ++u) engine.step(echo, za[u]);
        for (int u = t - 1; u >= 0; --u) engine.step_inverse(echo, zb[u]);
        std::complex<double> literal{0.0, 0.0};
        for (std::size_t i = 0; i < echo.size(); ++i)
            literal += std::conj(psi.amplitudes[i]) * echo.amplitudes[i];

        CHECK(std::abs(std::norm(direct) - std::norm(literal)) < 1e-12);
    }
}

TEST_CASE("noiseless echo fidelity is identically 1") {
    const MapParams p = params_from_classical_kick(4, 1, 1.3);
    const FidelityTrace t = echo_fidelity_trace(p, 0.0, 6, 3, 555);
    for (int u = 0; u <= t.steps(); ++u) {
        CHECK(t.f_mean[u] == Approx(1.0).margin(1e-12));
        CHECK(t.f_std_error[u] < 1e-12);
    }
    CHECK(t.f_mean[0] == 1.0);
}

TEST_CASE("trace statistics and reproducibility") {
    const MapParams p = params_from_classical_kick(5, 1, 0.9);
    const FidelityTrace a = echo_fidelity_trace(p, 1.0, 6, 24, 2024, 0, /*threads=*/1);
    const FidelityTrace b = echo_fidelity_trace(p, 1.0, 6, 24, 2024, 0, /*threads=*/3);
    SECTION("bit-identical under different thread counts") {
        for (std::size_t t = 0; t < a.f_mean.size(); ++t) {
            CHECK(a.f_mean[t] == b.f_mean[t]);
            CHECK(a.f_std_error[t] == b.f_std_error[t]);
        }
    }
    SECTION("values are fidelities") {
        for (std::size_t t = 0; t < a.f_mean.size(); ++t) {
            CHECK(a.f_mean[t] >= 0.0);
            CHECK(a.f_mean[t] <= 1.0 + 1e-12);
        }
        CHECK(a.f_mean[0] == 1.0);
        CHECK(a.realizations == 24);
    }
    SECTION("input validation") {
        CHECK_THROWS_AS(echo_fidelity_trace(p, 1.0, 0, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(echo_fidelity_trace(p, 1.0, 5, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(echo_fidelity_trace(p, -1.0, 5, 10, 1), std::invalid_argument);
    }
}

TEST_CASE("time-averaged momentum distribution is normalized") {
    const MapParams p = params_from_classical_kick(6, 1, 0.3);
    const std::vector<double> prof = time_averaged_momentum_distribution(p, 0, 3, 9);
    double sum = 0.0;
    for (double v : prof) sum += v;
    CHECK(sum == Approx(1.0).margin(1e-10));
    CHECK_THROWS_AS(time_averaged_momentum_distribution(p, 0, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(time_averaged_momentum_distribution(p, 0, 0, 4), std::invalid_argument);
}
