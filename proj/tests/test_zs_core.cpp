#include <cmath>

#include <catch_amalgamated.hpp>

#include "nft/continuous.hpp"
#include "nft/oracles.hpp"
#include "nft/steppers.hpp"
#include "nft/zs_core.hpp"
#include "support.hpp"

using namespace nft;
using Catch::Matchers::WithinAbs;

TEST_CASE("terminal state of the zero potential gives a = 1, b = 0", "[zs_core]") {
    const auto g = make_grid(-2.0, 3.0, 10);
    const cplx lambda{0.7, 0.2};
    JostState v{std::exp(-kJ * lambda * g.t2()), 0.0, cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    *v.dv1 = -kJ * g.t2() * v.v1;
    const auto c = coefficients_from_terminal(v, g, lambda);
    CHECK(std::abs(c.a - 1.0) < 1e-15);
    CHECK(c.b == cplx{0.0, 0.0});
    REQUIRE(c.a_prime);
    CHECK(std::abs(*c.a_prime) < 1e-15);
}

TEST_CASE("jost initial condition", "[zs_core]") {
    const auto s = jost_initial(cplx{0.5, 0.1}, -3.0, true);
    CHECK(std::abs(s.v1 - std::exp(-kJ * cplx{0.5, 0.1} * -3.0)) < 1e-15);
    CHECK(std::abs(*s.dv1 - (-kJ * -3.0) * s.v1) < 1e-15);
    CHECK(*s.dv2 == cplx{0.0, 0.0});
}

TEST_CASE("a vanishes at known eigenvalues", "[zs_core]") {
    const auto sy = propagate(Method::layer_peeling, test::sech(1.0, 15.0, 2048), cplx{0.0, 0.5});
    CHECK(std::abs(sy.a) < 1e-3);
    const auto re = propagate(Method::layer_peeling, test::rect(2.0, 4096), cplx{0.0, 1.5713});
    CHECK(std::abs(re.a) < 1e-3);
}

TEST_CASE("continuous amplitude and pole guard", "[zs_core]") {
    ScatteringCoefficients c;
    CHECK(continuous_amplitude(c) == cplx{0.0, 0.0});
    c.a = 0.0;
    CHECK_THROWS_AS(continuous_amplitude(c), PoleError);
    c.a = 1e-301;
    CHECK_THROWS_AS(continuous_amplitude(c), PoleError);
}

TEST_CASE("continuous amplitude of SY A = 0.5 against the closed form", "[zs_core]") {
    const Signal s = test::sech(0.5, 30.0, 8192);
    for (double lambda : {0.3, 0.7, 1.5}) {
        const cplx qhat = continuous_amplitude(propagate(Method::layer_peeling, s, lambda));
        CHECK(std::abs(qhat - sy_continuous(0.5, lambda)) < 1e-5);
    }
}

TEST_CASE("small amplitudes approach the linear Fourier transform", "[zs_core]") {
    // First-order Born term: q̂(λ) ≈ -∫ q*(t) e^{-2jλt} dt = -A√π e^{-λ²} for q = A e^{-t²}.
    const double A = 1e-4;
    const Signal s = test::pulse(PulseFamily::gaussian, A, -8.0, 8.0, 2048);
    for (double lambda : {0.0, 0.5, 1.3}) {
        const cplx qhat = continuous_amplitude(propagate(Method::layer_peeling, s, lambda));
        const double born = -A * std::sqrt(kPi) * std::exp(-lambda * lambda);
        CHECK(std::abs(qhat - born) < 1e-3 * A);
    }
}

TEST_CASE("discrete amplitude", "[zs_core]") {
    ScatteringCoefficients c;
    c.b = 2.0;
    CHECK_THROWS_AS(discrete_amplitude(c), std::invalid_argument);
    c.a_prime = 0.0;
    CHECK_THROWS_AS(discrete_amplitude(c), DegenerateError);
    c.a_prime = cplx{0.0, 4.0};
    CHECK(discrete_amplitude(c) == cplx{0.0, -0.5});

    PropagateOptions opt;
    opt.with_derivative = true;
    const auto sol = propagate(Method::layer_peeling, test::sech(1.0, 15.0, 1 << 15), cplx{0.0, 0.5}, opt);
    CHECK_THAT(std::abs(discrete_amplitude(sol)), WithinAbs(1.0, 1e-3));
}

TEST_CASE("layer-peeling is unimodular on the real axis", "[zs_core]") {
    for (const Signal& s : {test::sech(2.7, 16.0, 1024), test::rect(2.0, 4096),
                            test::pulse(PulseFamily::sinc, 4.0, -16.0, 16.0, 4096, 2.0)}) {
        for (double lambda : {-7.3, -1.0, 0.0, 0.2, 2.5, 19.0}) {
            const auto c = propagate(Method::layer_peeling, s, lambda);
            CHECK(std::abs(std::norm(c.a) + std::norm(c.b) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("a tends to 1 far out on the real axis", "[zs_core]") {
    for (const Signal& s : {test::rect(2.0, 1 << 16), test::sech(1.0, 10.0, 1 << 16)}) {
        const auto c = propagate(Method::layer_peeling, s, 1000.0);
        CHECK(std::abs(c.a - 1.0) < 1e-2);
    }
}

TEST_CASE("real signals have a symmetric continuous spectrum modulus", "[zs_core]") {
    for (const Signal& s : {test::rect(2.0, 2048), test::sech(1.3, 12.0, 2048)}) {
        for (double lambda : {0.4, 1.7, 5.0}) {
            const cplx p = continuous_amplitude(propagate(Method::layer_peeling, s, lambda));
            const cplx m = continuous_amplitude(propagate(Method::layer_peeling, s, -lambda));
            CHECK_THAT(std::abs(p), WithinAbs(std::abs(m), 1e-12));
        }
    }
}
