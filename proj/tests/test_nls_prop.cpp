#include <cmath>

#include <catch_amalgamated.hpp>

#include "nft/discrete_search.hpp"
#include "nft/nls_prop.hpp"
#include "nft/steppers.hpp"
#include "support.hpp"

using namespace nft;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Signal chirped_gaussian(long long n) {
    PulseSpec p;
    p.family = PulseFamily::gaussian;
    p.amplitude = 1.2;
    p.linear_chirp = 0.8;
    p.quad_chirp = 0.3;
    return generate(p, make_grid(-10.0, 10.0, n));
}

}  // namespace

TEST_CASE("fundamental soliton keeps its modulus", "[nls_prop]") {
    // Under j q_z = q_tt + 2|q|² q the sech soliton picks up only a phase.
    const Signal s = test::sech(1.0, 20.0, 1024);
    const auto r = ssf_propagate(s, {1.0, 2000, 2.0, false});
    double worst = 0.0;
    for (std::size_t i = 0; i < s.samples().size(); ++i) {
        worst = std::max(worst, std::abs(std::abs(r.signal.samples()[i]) - std::abs(s.samples()[i])));
    }
    CHECK(worst < 1e-6);
    // Phase of the soliton advances uniformly by z (e^{-j z} in this sign convention).
    const std::size_t mid = s.samples().size() / 2;
    CHECK_THAT(std::arg(r.signal.samples()[mid] / s.samples()[mid]), WithinAbs(-1.0, 1e-5));
}

TEST_CASE("zero distance is the identity", "[nls_prop]") {
    const Signal s = chirped_gaussian(512);
    const auto r = ssf_propagate(s, {0.0, 10, 2.0, false});
    for (std::size_t i = 0; i < s.samples().size(); ++i) CHECK(std::abs(r.signal.samples()[i] - s.samples()[i]) < 1e-12);
}

TEST_CASE("discrete eigenvalues are invariant under propagation", "[nls_prop]") {
    const Signal s = test::pulse(PulseFamily::gaussian, 1.5, -12.0, 12.0, 2048);
    const auto before = newton_refine(s, Method::layer_peeling, cplx{0.0, 0.5});
    REQUIRE(before.converged());
    const auto r = ssf_propagate(s, {0.5, 1000, 2.0, false});
    const auto after = newton_refine(r.signal, Method::layer_peeling, before.eigenvalue.lambda);
    REQUIRE(after.converged());
    CHECK(std::abs(after.eigenvalue.lambda - before.eigenvalue.lambda) < 1e-3);
}

TEST_CASE("continuous spectrum evolves by the dispersion phase", "[nls_prop]") {
    CHECK(expected_continuous_evolution(cplx{0.3, 0.1}, 1.3, 0.0) == cplx{0.3, 0.1});
    const cplx e = expected_continuous_evolution(1.0, 1.0, 0.1);
    CHECK_THAT(std::arg(e), WithinAbs(-0.4, 1e-14));

    // Subcritical pulse: |q̂| preserved, phase rotated by -4λ²z.
    const Signal s = test::pulse(PulseFamily::gaussian, 0.5, -15.0, 15.0, 2048);
    const double z = 0.1, lambda = 1.0;
    const auto r = ssf_propagate(s, {z, 1000, 2.0, false});
    const auto c0 = propagate(Method::layer_peeling, s, lambda);
    const auto c1 = propagate(Method::layer_peeling, r.signal, lambda);
    CHECK(std::abs(c1.b / c1.a - expected_continuous_evolution(c0.b / c0.a, lambda, z)) < 1e-4);
}

TEST_CASE("conserved quantities are preserved", "[nls_prop]") {
    const Signal s = chirped_gaussian(2048);
    const auto r = ssf_propagate(s, {0.3, 3000, 3.0, false});
    for (int k = 1; k <= 3; ++k) {
        INFO("k=" << k);
        const double e0 = conserved(s, k), e1 = conserved(r.signal, k);
        CHECK(std::abs(e1 - e0) < 1e-4 * std::max(1.0, std::abs(e0)));
    }
    CHECK(r.leakage < 1e-6);
    CHECK_FALSE(r.leakage_warning);
}

TEST_CASE("plan validation", "[nls_prop]") {
    CHECK_NOTHROW(validate(PropagationPlan{1.0, 1, 1.0, false}));
    CHECK_THROWS_AS(validate(PropagationPlan{1.0, 0, 2.0, false}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PropagationPlan{1.0, 10, 0.5, false}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PropagationPlan{-1.0, 10, 2.0, false}), std::invalid_argument);
}

TEST_CASE("padding can be kept", "[nls_prop]") {
    const Signal s = test::sech(1.0, 10.0, 256);
    const auto r = ssf_propagate(s, {0.1, 10, 2.0, true});
    CHECK(r.signal.grid().t2() - r.signal.grid().t1() > 1.9 * (s.grid().t2() - s.grid().t1()));
}

TEST_CASE("leakage is reported for dispersing pulses", "[nls_prop]") {
    // A narrow subcritical pulse spreads well past a tight window.
    const Signal s = test::pulse(PulseFamily::gaussian, 0.3, -3.0, 3.0, 512, 4.0);
    const auto r = ssf_propagate(s, {2.0, 400, 1.5, false});
    CHECK(r.leakage > 1e-6);
    CHECK(r.leakage_warning);
}

TEST_CASE("fiber unit conversion", "[nls_prop]") {
    // β2 = -D λ² / (2π c), D in ps/(nm km), λ in nm, c in nm/ps.
    const double c_nm_per_ps = 299792.458;
    const double beta2 = -17.0 * 1550.0 * 1550.0 / (2.0 * kPi * c_nm_per_ps);
    const auto f = fiber_scales(10.0);
    CHECK_THAT(f.beta2_ps2_per_km, WithinRel(beta2, 1e-9));
    CHECK_THAT(f.beta2_ps2_per_km, WithinAbs(-21.68, 1e-2));
    CHECK_THAT(f.z_unit_km, WithinRel(2.0 * 100.0 / std::abs(beta2), 1e-9));
    CHECK_THAT(f.power_unit_w, WithinRel(std::abs(beta2) / (1.27 * 100.0), 1e-9));
}
