#include <cmath>
#include <cstdlib>

#include <catch_amalgamated.hpp>

#include "nft/continuous.hpp"
#include "nft/oracles.hpp"
#include "nft/parallel.hpp"
#include "support.hpp"

using namespace nft;
using Catch::Matchers::WithinAbs;

TEST_CASE("lambda mesh", "[continuous]") {
    const auto m = make_mesh(-20.0, 20.0, 2001);
    CHECK(m.step() == 0.02);
    CHECK(m.point(0) == -20.0);
    CHECK(m.point(2000) == 20.0);
    CHECK(m.points().size() == 2001);
    CHECK_THROWS_AS(make_mesh(1.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_mesh(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("zero potential has a zero continuous spectrum", "[continuous]") {
    const auto spec = continuous_spectrum(test::zeros(-3.0, 3.0, 256), Method::layer_peeling, make_mesh(-5, 5, 101));
    for (const auto& p : spec.points) CHECK(p.qhat == cplx{0.0, 0.0});
    CHECK(spectral_energy(spec, 1).value == 0.0);
    CHECK(spec.poles().empty());
}

TEST_CASE("pure soliton has no continuous spectrum", "[continuous]") {
    const auto spec = continuous_spectrum(test::sech(1.0, 15.0, 2048), Method::layer_peeling, make_mesh(-10, 10, 401));
    double worst = 0.0;
    for (const auto& p : spec.points) worst = std::max(worst, std::abs(p.qhat));
    CHECK(worst < 1e-3);
}

TEST_CASE("rectangle spectrum against the closed form", "[continuous]") {
    const auto spec = continuous_spectrum(test::rect(2.0, 2048), Method::layer_peeling, make_mesh(-10, 10, 401));
    for (const auto& p : spec.points) CHECK(std::abs(p.qhat - rect_continuous(2.0, -1.0, 1.0, p.lambda)) < 1e-3);
}

TEST_CASE("continuous energy absorbs all energy without eigenvalues", "[continuous]") {
    // SY A = 0.4 has no eigenvalue in the upper half plane: E_cont = 2A² = 0.32.
    const auto sy = continuous_spectrum(test::sech(0.4, 20.0, 4096), Method::layer_peeling, make_mesh(-20, 20, 2001));
    CHECK_THAT(spectral_energy(sy, 1).value, WithinAbs(0.32, 1e-2));
    // Subcritical rectangle A = 0.5 on [-1, 1]: E = 0.25 · 2.
    REQUIRE(rect_discrete(0.5, -1.0, 1.0).empty());
    const auto re = continuous_spectrum(test::rect(0.5, 2048), Method::layer_peeling, make_mesh(-20, 20, 2001));
    CHECK_THAT(spectral_energy(re, 1).value, WithinAbs(0.5, 1e-2));
}

TEST_CASE("spectral energy tail check", "[continuous]") {
    const Signal s = test::rect(2.0, 1024);
    const auto narrow = continuous_spectrum(s, Method::layer_peeling, make_mesh(-2, 2, 201));
    CHECK_FALSE(spectral_energy(narrow, 1).tail_ok);
    const auto smooth = continuous_spectrum(test::pulse(PulseFamily::gaussian, 0.8, -8, 8, 1024),
                                            Method::layer_peeling, make_mesh(-20, 20, 2001));
    CHECK(spectral_energy(smooth, 1).tail_ok);
}

TEST_CASE("spectral energy converges at second order in the mesh", "[continuous]") {
    // The integrand has non-zero slope at the ends of [-1, 2], so the trapezoid error is O(h²).
    const Signal s = test::pulse(PulseFamily::gaussian, 0.8, -8, 8, 1024);
    auto e = [&](long long m) {
        return spectral_energy(continuous_spectrum(s, Method::layer_peeling, make_mesh(-1, 2, m)), 1).value;
    };
    const double e1 = e(51), e2 = e(101), e3 = e(201);
    const double ratio = (e1 - e2) / (e2 - e3);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("continuous spectrum does not depend on the thread count", "[continuous]") {
    const Signal s = test::pulse(PulseFamily::sinc, 4.0, -8, 8, 512, 2.0);
    ::setenv("NFT_THREADS", "1", 1);
    const auto a = continuous_spectrum(s, Method::rk4, make_mesh(-5, 5, 101));
    ::setenv("NFT_THREADS", "4", 1);
    const auto b = continuous_spectrum(s, Method::rk4, make_mesh(-5, 5, 101));
    ::unsetenv("NFT_THREADS");
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].qhat == b.points[i].qhat);
}

TEST_CASE("parallel_for visits every index and rethrows", "[continuous]") {
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; }, 3);
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
                    std::runtime_error);
}
