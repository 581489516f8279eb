#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <catch_amalgamated.hpp>

#include "nft/signal.hpp"
#include "support.hpp"

using namespace nft;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("make_grid spacing and nodes", "[signal]") {
    const auto g = make_grid(-1.0, 1.0, 4);
    CHECK(g.eps() == 0.5);
    const auto t = g.nodes();
    REQUIRE(t.size() == 5);
    CHECK(t == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(make_grid(-8.0, 8.0, 1024).eps() == 0.015625);
    CHECK(make_grid(-3.3, 7.1, 999).node(999) == 7.1);
}

TEST_CASE("make_grid rejects degenerate windows", "[signal]") {
    CHECK_THROWS_AS(make_grid(0.0, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, -1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("auto_window against closed-form energy fractions", "[signal]") {
    PulseSpec s;
    s.family = PulseFamily::sech;
    // ∫_{-T}^{T} sech² / ∫ sech² = tanh(T).
    auto [a, b] = auto_window(s, 0.9999);
    CHECK_THAT(b, WithinAbs(std::atanh(0.9999), 1e-5));
    CHECK(a == -b);

    s.family = PulseFamily::rect;
    s.amplitude = 2.0;
    std::tie(a, b) = auto_window(s, 0.9999);
    CHECK(a == -1.0);
    CHECK(b == 1.0);

    // |e^{-t²}|² = e^{-2t²}: fraction erf(√2 T).
    s.family = PulseFamily::gaussian;
    std::tie(a, b) = auto_window(s, 0.9999);
    CHECK_THAT(b, WithinAbs(boost::math::erf_inv(0.9999) / std::sqrt(2.0), 1e-5));

    s.amplitude = 0.0;
    std::tie(a, b) = auto_window(s, 0.9999);
    CHECK(a == -1.0);
    CHECK(b == 1.0);
}

TEST_CASE("auto_window centres wavetrains on their delays", "[signal]") {
    PulseSpec s;
    s.family = PulseFamily::wavetrain;
    s.train_base = PulseFamily::gaussian;
    s.train = {{1.0, 3.0}, {1.0, 5.0}};
    const auto [a, b] = auto_window(s, 0.9999);
    CHECK_THAT(0.5 * (a + b), WithinAbs(4.0, 1e-9));
}

TEST_CASE("generate samples the analytic families", "[signal]") {
    const Signal s = test::sech(2.7, 4.0, 8);
    CHECK(s[4] == cplx{2.7, 0.0});

    const Signal r = test::pulse(PulseFamily::rect, 2.0, -2.0, 2.0, 8);
    CHECK(r[5] == cplx{2.0, 0.0});  // t = 0.5
    CHECK(r[1] == cplx{0.0, 0.0});  // t = -1.5
    CHECK(r[7] == cplx{0.0, 0.0});  // t = 1.5

    PulseSpec c;
    c.family = PulseFamily::sinc;
    c.amplitude = 4.0;
    c.scale = 2.0;
    c.quad_chirp = 15.0;
    const Signal q = generate(c, make_grid(-3.0, 3.0, 300));
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double t = q.grid().node(k);
        const double x = kPi * 2.0 * t;
        const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
        const cplx expect = 4.0 * std::exp(cplx{0.0, 15.0 * t * t}) * sinc;
        CHECK(std::abs(q[k] - expect) < 1e-13);
    }
}

TEST_CASE("generate applies linear chirp and phase", "[signal]") {
    PulseSpec c;
    c.family = PulseFamily::gaussian;
    c.linear_chirp = 3.0;
    c.phase = 0.7;
    const Signal q = generate(c, make_grid(-2.0, 2.0, 40));
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double t = q.grid().node(k);
        const cplx expect = std::exp(-t * t) * std::exp(cplx{0.0, 0.7 - 3.0 * t});
        CHECK(std::abs(q[k] - expect) < 1e-14);
    }
}

TEST_CASE("generate wavetrain superposes shifted copies", "[signal]") {
    PulseSpec c;
    c.family = PulseFamily::wavetrain;
    c.train_base = PulseFamily::sinc;
    c.scale = 2.0;
    c.train = {{2.0, -0.5}, {cplx{0.0, 1.0}, 0.5}};
    const Signal q = generate(c, make_grid(-4.0, 4.0, 64));
    auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); };
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double t = q.grid().node(k);
        const cplx expect = 2.0 * sinc(2.0 * (t + 0.5)) + cplx{0.0, 1.0} * sinc(2.0 * (t - 0.5));
        CHECK(std::abs(q[k] - expect) < 1e-14);
    }
}

TEST_CASE("pulse spec validation", "[signal]") {
    PulseSpec s;
    s.scale = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.scale = 1.0;
    s.family = PulseFamily::wavetrain;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("triangle"), std::invalid_argument);
    s.family = PulseFamily::file;
    s.path = "/nonexistent/file.csv";
    CHECK_THROWS(generate(s, make_grid(-1.0, 1.0, 4)));
}

TEST_CASE("energy of sech matches the closed form", "[signal]") {
    const double A = 2.7, T = 10.0;
    const Signal s = test::sech(A, T, 4096);
    CHECK_THAT(conserved(s, 1), WithinRel(2.0 * A * A * std::tanh(T), 1e-5));
    CHECK_THAT(conserved(test::sech(A, 20.0, 8192), 1), WithinAbs(14.58, 1e-3));
}

TEST_CASE("conserved quantities vanish for the zero signal", "[signal]") {
    const Signal z = test::zeros(-1.0, 1.0, 64);
    for (int k = 1; k <= 3; ++k) CHECK(conserved(z, k) == 0.0);
}

TEST_CASE("E3 of sech against fine quadrature", "[signal]") {
    const double T = 8.0;
    // -1/4 ∫ (|q|⁴ - |q_t|²) with q = sech, q_t = -sech tanh.
    auto integrand = [](double t) {
        const double s = 1.0 / std::cosh(t), th = std::tanh(t);
        return -0.25 * (std::pow(s, 4) - s * s * th * th);
    };
    const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -T, T, 15, 1e-14);
    CHECK_THAT(conserved(test::sech(1.0, T, 8192), 3), WithinAbs(ref, 1e-6));
    CHECK_THAT(ref, WithinAbs(-1.0 / 6.0, 1e-5));
}

TEST_CASE("trapezoid energy converges at second order", "[signal]") {
    // Truncated sech: the endpoint derivative is non-zero, so the trapezoid error is O(eps²).
    const double e1 = conserved(test::sech(1.0, 3.0, 64), 1);
    const double e2 = conserved(test::sech(1.0, 3.0, 128), 1);
    const double e3 = conserved(test::sech(1.0, 3.0, 256), 1);
    const double ratio = (e1 - e2) / (e2 - e3);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("generate is linear in amplitude and phase preserves modulus", "[signal]") {
    const Signal a = test::pulse(PulseFamily::gaussian, 1.0, -3.0, 3.0, 128);
    const Signal b = test::pulse(PulseFamily::gaussian, 2.5, -3.0, 3.0, 128);
    PulseSpec p;
    p.family = PulseFamily::gaussian;
    p.phase = 1.234;
    const Signal c = generate(p, make_grid(-3.0, 3.0, 128));
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(b[k] - 2.5 * a[k]) <= 1e-15 * std::abs(b[k]));
        CHECK_THAT(std::abs(c[k]), WithinRel(std::abs(a[k]), 1e-15));
    }
    CHECK_THAT(conserved(c, 1), WithinRel(conserved(a, 1), 1e-14));
}

TEST_CASE("momentum is real and vanishes for real pulses", "[signal]") {
    const Signal s = test::sech(1.0, 10.0, 2048);
    CHECK(std::abs(conserved(s, 2)) < 1e-14);
    // e^{-jωt} sech(t): (1/2j)∫ q conj(q_t) = (ω/2) ∫ sech² = ω (standard form).
    PulseSpec p;
    p.linear_chirp = 1.5;
    const Signal c = generate(p, make_grid(-15.0, 15.0, 8192));
    CHECK_THAT(conserved(c, 2), WithinAbs(1.5, 1e-3));
}

TEST_CASE("l1 norm of a rectangle", "[signal]") {
    CHECK_THAT(l1_norm(test::rect(2.0, 100)), WithinAbs(4.0, 1e-12));
}
