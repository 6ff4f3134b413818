#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sawtooth/fourier.hpp"
#include "sawtooth/params.hpp"
#include "sawtooth/rng.hpp"
#include "sawtooth/state.hpp"

using namespace sawtooth;
using Catch::Approx;

namespace {

std::vector<std::complex<double>> random_state(std::size_t n, std::uint64_t seed) {
    const NoiseStream stream(seed, 0, 0);
    std::vector<std::complex<double>> a(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = {stream.gaussian(2 * i), stream.gaussian(2 * i + 1)};
        norm += std::norm(a[i]);
    }
    for (auto& c : a) c /= std::sqrt(norm);
    return a;
}

/// Direct O(N^2) centered transform: the oracle the FFT must match.
std::vector<std::complex<double>> dft_oracle(const std::vector<std::complex<double>>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> y(x.size());
    for (int pi = 0; pi < n; ++pi) {
        const int p = pi - n / 2;
        std::complex<double> acc{0.0, 0.0};
        for (int qi = 0; qi < n; ++qi) {
            const int q = qi - n / 2;
            const double arg = -2.0 * std::numbers::pi * p * q / n;
            acc += std::complex<double>{std::cos(arg), std::sin(arg)} * x[qi];
        }
        y[pi] = acc / std::sqrt(static_cast<double>(n));
    }
    return y;
}

double max_deviation(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("uniform position state transforms to |p = 0>") {
    const std::size_t n = 8;
    QuantumState s;
    s.basis = Basis::position;
    s.amplitudes.assign(n, {1.0 / std::sqrt(static_cast<double>(n)), 0.0});
    to_momentum_inplace(s, FourierPlan(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double expected = i == n / 2 ? 1.0 : 0.0;
        CHECK(std::abs(s.amplitudes[i] - std::complex<double>{expected, 0.0}) < 1e-12);
    }
}

TEST_CASE("fast transform matches the direct summation oracle") {
    for (std::size_t n : {2u, 4u, 8u, 32u}) {
        const FourierPlan plan(n);
        std::vector<std::complex<double>> x = random_state(n, 100 + n);
        std::vector<std::complex<double>> fast = x;
        plan.position_to_momentum(fast);
        CHECK(max_deviation(fast, dft_oracle(x)) < 1e-12);
    }
}

TEST_CASE("round trip is the identity to 1e-12") {
    for (std::size_t n : {2u, 8u, 1024u}) {
        const FourierPlan plan(n);
        const std::vector<std::complex<double>> x = random_state(n, n);
        std::vector<std::complex<double>> y = x;
        plan.position_to_momentum(y);
        plan.momentum_to_position(y);
        CHECK(max_deviation(x, y) < 1e-12);
    }
}

TEST_CASE("transform is unitary") {
    const FourierPlan plan(64);
    std::vector<std::complex<double>> x = random_state(64, 9);
    double before = 0.0;
    for (const auto& c : x) before += std::norm(c);
    plan.position_to_momentum(x);
    double after = 0.0;
    for (const auto& c : x) after += std::norm(c);
    CHECK(after == Approx(before).epsilon(1e-13));
}

TEST_CASE("plan validates sizes") {
    CHECK_THROWS_AS(FourierPlan(0), std::invalid_argument);
    CHECK_THROWS_AS(FourierPlan(3), std::invalid_argument);
    FourierPlan plan(8);
    std::vector<std::complex<double>> wrong(4);
    CHECK_THROWS_AS(plan.position_to_momentum(wrong), std::invalid_argument);
}

TEST_CASE("basis tags prevent silent misuse") {
    const MapParams p = params_from_classical_kick(3, 1, 1.5);
    QuantumState s = momentum_eigenstate(p, 0);
    CHECK(s.basis == Basis::momentum);
    const FourierPlan plan(p.basis_size);
    CHECK_THROWS_AS(to_momentum_inplace(s, plan), std::invalid_argument);
    to_position_inplace(s, plan);
    CHECK(s.basis == Basis::position);
    CHECK_THROWS_AS(to_position_inplace(s, plan), std::invalid_argument);
}

TEST_CASE("momentum eigenstate indexing is centered") {
    const MapParams p = params_from_classical_kick(3, 1, 1.5);
    const QuantumState s = momentum_eigenstate(p, -4);
    CHECK(std::abs(s.amplitudes[0] - std::complex<double>{1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(momentum_eigenstate(p, 4), std::out_of_range);
    CHECK_THROWS_AS(momentum_eigenstate(p, -5), std::out_of_range);
}

TEST_CASE("momentum distribution") {
    const MapParams p = params_from_classical_kick(4, 1, 1.5);
    SECTION("eigenstate gives an indicator") {
        const std::vector<double> d = momentum_distribution(momentum_eigenstate(p, 3));
        for (std::size_t i = 0; i < d.size(); ++i)
            CHECK(d[i] == Approx(i == 8 + 3 ? 1.0 : 0.0).margin(1e-14));
    }
    SECTION("uniform superposition over positions concentrates at p = 0") {
        QuantumState s;
        s.basis = Basis::position;
        s.amplitudes.assign(p.basis_size, {0.25, 0.0});
        const std::vector<double> d = momentum_distribution(s);
        CHECK(d[8] == Approx(1.0).margin(1e-12));
    }
    SECTION("normalization is preserved on a random state") {
        QuantumState s;
        s.basis = Basis::position;
        s.amplitudes = random_state(16, 5);
        const std::vector<double> d = momentum_distribution(s);
        double sum = 0.0;
        for (double v : d) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}
