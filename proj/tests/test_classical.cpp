#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "sawtooth/classical.hpp"
#include "sawtooth/rng.hpp"

using namespace sawtooth;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("wrap_centered maps into [-P/2, P/2)") {
    CHECK(wrap_centered(0.0, 2 * kPi) == 0.0);
    CHECK(wrap_centered(kPi, 2 * kPi) == Approx(-kPi));
    CHECK(wrap_centered(3.0, 2 * kPi) == Approx(3.0));
    CHECK(wrap_centered(6.0, 2 * kPi) == Approx(6.0 - 2 * kPi));
    CHECK(wrap_centered(-7.0, 2 * kPi) == Approx(-7.0 + 2 * kPi));
    for (double x : {-123.456, -1.0, 0.5, 99.99, 1e6}) {
        const double w = wrap_centered(x, 2 * kPi);
        CHECK(w >= -kPi);
        CHECK(w < kPi);
    }
}

TEST_CASE("csm_step worked values") {
    SECTION("fixed point at the origin") {
        const ClassicalState s = csm_step({0.0, 0.0}, 1.0, 1, 0.0, Manifold::torus);
        CHECK(s.action == 0.0);
        CHECK(s.angle == 0.0);
    }
    SECTION("direct substitution, no wrap") {
        const ClassicalState s = csm_step({0.0, 1.0}, 1.0, 1, 0.0, Manifold::torus);
        CHECK(s.action == Approx(1.0));
        CHECK(s.angle == Approx(2.0));
    }
    SECTION("hand-iterated wrap") {
        // J' = 3 + 3 = 6 -> 6 - 2 pi; theta' = 3 + J' wrapped into [-pi, pi)
        const ClassicalState s = csm_step({3.0, 3.0}, 1.0, 1, 0.0, Manifold::torus);
        CHECK(s.action == Approx(6.0 - 2 * kPi).epsilon(1e-12));
        CHECK(s.angle == Approx(3.0 + 6.0 - 2 * kPi).epsilon(1e-12));
        CHECK(s.action == Approx(-0.2832).margin(5e-5));
        CHECK(s.angle == Approx(2.7168).margin(5e-5));
    }
    SECTION("cylinder leaves the action unwrapped") {
        const ClassicalState s = csm_step({3.0, 3.0}, 1.0, 1, 0.0, Manifold::cylinder);
        CHECK(s.action == Approx(6.0));
        CHECK(s.angle >= -kPi);
        CHECK(s.angle < kPi);
    }
}

TEST_CASE("torus wrap closure holds on every step") {
    const NoiseStream stream(99, 0, 0);
    for (int winding : {1, 2, 3}) {
        ClassicalState s{0.1, 0.2};
        for (int t = 1; t <= 2000; ++t) {
            const double kick = 0.5 + 3.0 * stream.uniform(static_cast<std::uint64_t>(4 * t + winding));
            s = csm_step(s, kick, winding, 0.0, Manifold::torus);
            REQUIRE(s.action >= -kPi * winding);
            REQUIRE(s.action < kPi * winding);
            REQUIRE(s.angle >= -kPi);
            REQUIRE(s.angle < kPi);
        }
    }
}

TEST_CASE("lyapunov exponent closed form") {
    SECTION("K -> 0+ limit vanishes") { CHECK(lyapunov_exponent(1e-12) < 1e-5); }
    SECTION("K = 1") {
        CHECK(lyapunov_exponent(1.0) == Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-14));
        CHECK(lyapunov_exponent(1.0) == Approx(0.96242365011920694).epsilon(1e-12));
    }
    SECTION("K = 100 matches the strong-kick expansion ln(K + 2)") {
        CHECK(lyapunov_exponent(100.0) == Approx(std::log(102.0)).margin(1e-4));
        CHECK(lyapunov_exponent(100.0) == Approx(4.6250).margin(1e-4));
    }
    SECTION("characteristic equation e^l + e^-l = 2 + K on a log grid") {
        for (double lk = -3.0; lk <= 3.0; lk += 0.125) {
            const double kick = std::pow(10.0, lk);
            const double l = lyapunov_exponent(kick);
            CHECK(std::exp(l) + std::exp(-l) == Approx(2.0 + kick).epsilon(1e-12));
        }
    }
    SECTION("weak-kick expansion sqrt(K) - K^1.5/24 + K^2/4") {
        for (double kick : {0.001, 0.01, 0.03, 0.05}) {
            const double series =
                std::sqrt(kick) - std::pow(kick, 1.5) / 24.0 + 0.25 * kick * kick;
            CHECK(std::abs(lyapunov_exponent(kick) - series) < 1e-3);
        }
    }
    SECTION("monotone increasing") {
        double prev = 0.0;
        for (double kick = 0.1; kick < 50.0; kick *= 1.5) {
            const double l = lyapunov_exponent(kick);
            CHECK(l > prev);
            prev = l;
        }
    }
    SECTION("domain error for K <= 0") {
        CHECK_THROWS_AS(lyapunov_exponent(0.0), std::domain_error);
        CHECK_THROWS_AS(lyapunov_exponent(-1.0), std::domain_error);
    }
}

TEST_CASE("diffusion coefficient branches") {
    CHECK(diffusion_coefficient(2.0) == Approx(4.0 * kPi * kPi / 3.0).epsilon(1e-14));
    CHECK(diffusion_coefficient(2.0) == Approx(13.159).margin(5e-4));
    CHECK(diffusion_coefficient(0.25) == Approx(3.3 * 0.03125).epsilon(1e-14));
    // The branch point belongs to the strong-kick form; the two forms agree
    // to 0.4% there.
    CHECK(diffusion_coefficient(1.0) == Approx(kPi * kPi / 3.0).epsilon(1e-14));
    CHECK(std::abs(diffusion_coefficient(1.0) - 3.3) / 3.3 < 0.004);
    CHECK_THROWS_AS(diffusion_coefficient(0.0), std::domain_error);
    CHECK(chaos_metrics(2.0).lyapunov == Approx(lyapunov_exponent(2.0)));
}

TEST_CASE("classical ensemble keeps its members on the manifold") {
    ClassicalEnsemble ens(256, 1.3, 1, 77);
    REQUIRE(ens.states().size() == 256);
    for (int t = 0; t < 50; ++t) {
        ens.advance(0.2, Manifold::torus);
        REQUIRE(ens.states().size() == 256);
        for (const ClassicalState& s : ens.states()) {
            REQUIRE(s.action >= -kPi);
            REQUIRE(s.action < kPi);
            REQUIRE(s.angle >= -kPi);
            REQUIRE(s.angle < kPi);
        }
    }
    CHECK(ens.step_count() == 50);
    CHECK_THROWS_AS(ClassicalEnsemble(0, 1.0, 1, 1), std::invalid_argument);
}

TEST_CASE("measure_diffusion input validation") {
    CHECK_THROWS_AS(measure_diffusion(2.0, 0.0, 99, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(measure_diffusion(2.0, 0.0, 1000, 9, 1), std::invalid_argument);
}

TEST_CASE("measure_diffusion is deterministic and schedule independent") {
    const DiffusionSeries a = measure_diffusion(1.5, 0.3, 4000, 40, 2024, 1);
    const DiffusionSeries b = measure_diffusion(1.5, 0.3, 4000, 40, 2024, 3);
    CHECK(a.coefficient == b.coefficient);
    for (std::size_t t = 0; t < a.msd_mean.size(); ++t) CHECK(a.msd_mean[t] == b.msd_mean[t]);
}

TEST_CASE("noiseless chaotic diffusion matches the random-phase value", "[slow]") {
    const double predicted = kPi * kPi / 3.0 * 4.0;  // K = 2
    const DiffusionSeries d = measure_diffusion(2.0, 0.0, 100000, 100, 31337);
    CHECK(std::abs(d.coefficient - predicted) / predicted < 0.10);
    CHECK(std::abs(d.coefficient - predicted) < 3.0 * d.coefficient_std_error);
}

TEST_CASE("kick noise adds its variance to the diffusion rate", "[slow]") {
    const double predicted = kPi * kPi / 3.0 * (4.0 + 1.0);  // K = 2, eps = 1
    const DiffusionSeries d = measure_diffusion(2.0, 1.0, 100000, 100, 31338);
    CHECK(std::abs(d.coefficient - predicted) / predicted < 0.10);
}

TEST_CASE("regular regime does not diffuse") {
    const DiffusionSeries d = measure_diffusion(-2.0, 0.0, 20000, 100, 4);
    CHECK(std::abs(d.coefficient) < 1e-2);
}
