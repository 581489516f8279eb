#include "nft/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace nft {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                         771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                         -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log sin(w), stable for large |Im w|.
cplx log_sin(cplx w) {
    if (w.imag() > 20.0) return -kJ * w + std::log((1.0 - std::exp(2.0 * kJ * w)) / (-2.0 * kJ));
    if (w.imag() < -20.0) return kJ * w + std::log((1.0 - std::exp(-2.0 * kJ * w)) / (2.0 * kJ));
    return std::log(std::sin(w));
}

cplx lanczos_log(cplx z) {
    // z >= 0.5 half plane
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("gamma function pole at z = " + std::to_string(z.real()));
    if (z.real() < 0.5) return std::log(kPi) - log_sin(kPi * z) - lanczos_log(1.0 - z);
    return lanczos_log(z);
}

cplx gamma_complex(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("gamma function pole at z = " + std::to_string(z.real()));
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx sy_continuous(double A, double lambda) {
    if (!(A > 0.0)) throw std::invalid_argument("sech amplitude must be positive");
    if (A == std::floor(A)) return 0.0;
    const cplx c(0.5, -lambda);
    if (is_nonpositive_integer(c - A)) throw PoleError("a(lambda) = 0 on the real axis");
    const cplx lg = log_gamma(c + A) + log_gamma(c - A) - 2.0 * log_gamma(c);
    // sin(πA)/cosh(πλ) written to avoid overflow of cosh.
    const double x = kPi * std::abs(lambda);
    const double sech = 2.0 * std::exp(-x) / (1.0 + std::exp(-2.0 * x));
    return -std::exp(lg) * std::sin(kPi * A) * sech;
}

cplx sy_a(double A, cplx lambda) {
    const cplx c = 0.5 - kJ * lambda;
    if (is_nonpositive_integer(c - A) || is_nonpositive_integer(c + A)) return 0.0;
    return std::exp(2.0 * log_gamma(c) - log_gamma(c + A) - log_gamma(c - A));
}

std::vector<cplx> sy_discrete(double A) {
    std::vector<cplx> out;
    for (double eta = A - 0.5; eta > 0.0; eta -= 1.0) out.emplace_back(0.0, eta);
    return out;
}

cplx rect_a(cplx A, double t1, double t2, cplx lambda) {
    const double T = t2 - t1;
    const cplx d2 = lambda * lambda + std::norm(A);
    const cplx d = std::sqrt(d2);
    const cplx s = std::abs(d) < 1e-8 ? cplx(T) : std::sin(d * T) / d;
    return (std::cos(d * T) - kJ * lambda * s) * std::exp(kJ * lambda * T);
}

cplx rect_continuous(cplx A, double t1, double t2, double lambda) {
    const double T = t2 - t1;
    const cplx d = std::sqrt(cplx(lambda * lambda + std::norm(A)));
    const cplx s = std::abs(d) < 1e-8 ? cplx(T) : std::sin(d * T) / d;
    const cplx den = std::cos(d * T) - kJ * lambda * s;
    if (std::abs(den) < 1e-300) throw PoleError("rectangle spectrum pole at lambda = " + std::to_string(lambda));
    return -std::conj(A) * s * std::exp(-2.0 * kJ * lambda * t2) / den;
}

double rect_root_function(double abs_a, double T, double eta) {
    const double kappa = std::sqrt(std::max(0.0, abs_a * abs_a - eta * eta));
    const double sinc_term = kappa < 1e-12 ? T : std::sin(kappa * T) / kappa;
    return std::cos(kappa * T) + eta * sinc_term;
}

std::vector<cplx> rect_discrete(cplx A, double t1, double t2) {
    const double r = std::abs(A);
    const double T = t2 - t1;
    std::vector<cplx> out;
    if (!(r > 0.0) || !(T > 0.0)) return out;
    const int samples = 20000;
    auto f = [&](double eta) { return rect_root_function(r, T, eta); };
    double prev_x = r * 1e-9;
    double prev_f = f(prev_x);
    for (int i = 1; i <= samples; ++i) {
        const double x = r * (static_cast<double>(i) / samples) * (1.0 - 1e-12);
        const double fx = f(x);
        if (fx == 0.0) {
            out.emplace_back(0.0, x);
        } else if ((prev_f < 0.0) != (fx < 0.0) && prev_f != 0.0) {
            boost::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(52);
            const auto br = boost::math::tools::toms748_solve(f, prev_x, x, prev_f, fx, tol, iters);
            out.emplace_back(0.0, 0.5 * (br.first + br.second));
        }
        prev_x = x;
        prev_f = fx;
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.imag() > b.imag(); });
    return out;
}

int klaus_shaw_count(double l1) { return static_cast<int>(std::floor(0.5 + l1 / kPi - 1e-12)); }

namespace {

namespace odeint = boost::numeric::odeint;
using State2 = std::array<cplx, 2>;
using State1 = std::array<cplx, 1>;

struct RiccatiBlowup {};

OdeReference linear_reference(const PulseFunction& q, double t1, double t2, double lambda, double tol) {
    const cplx lam(lambda, 0.0);
    auto rhs = [&](const State2& u, State2& du, double t) {
        const cplx qt = q(t);
        du[0] = qt * std::exp(2.0 * kJ * lam * t) * u[1];
        du[1] = -std::conj(qt) * std::exp(-2.0 * kJ * lam * t) * u[0];
    };
    State2 u{cplx(1.0), cplx(0.0)};
    auto stepper = odeint::make_controlled(tol * 1e-2, tol * 1e-2, odeint::runge_kutta_dopri5<State2>());
    odeint::integrate_adaptive(stepper, rhs, u, t1, t2, (t2 - t1) * 1e-4);
    OdeReference r;
    r.a = u[0];
    r.b = u[1];
    r.qhat = u[1] / u[0];
    r.used_linear_form = true;
    return r;
}

cplx interpolate(const Signal& s, double t) {
    const TimeGrid& g = s.grid();
    const std::size_t n = g.n();
    const double x = (t - g.t1()) / g.eps();
    if (x <= 0.0) return s[0];
    if (x >= static_cast<double>(n)) return s[n];
    std::size_t k = static_cast<std::size_t>(x);
    if (k >= n) k = n - 1;
    // four-point Lagrange stencil k-1..k+2, shifted inside the grid
    std::size_t lo = k == 0 ? 0 : k - 1;
    if (lo + 3 > n) lo = n - 3;
    const double u = x - static_cast<double>(lo);
    cplx sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) w *= (u - j) / static_cast<double>(i - j);
        }
        sum += w * s[lo + i];
    }
    return sum;
}

}  // namespace

OdeReference ode_continuous_reference(const PulseFunction& q, double t1, double t2, double lambda, double tol) {
    const cplx lam(lambda, 0.0);
    auto rhs = [&](const State1& y, State1& dy, double t) {
        const cplx qt = q(t);
        dy[0] = -qt * std::exp(2.0 * kJ * lam * t) * y[0] * y[0] - std::conj(qt) * std::exp(-2.0 * kJ * lam * t);
    };
    State1 y{cplx(0.0)};
    try {
        auto stepper = odeint::make_controlled(tol * 1e-2, tol * 1e-2, odeint::runge_kutta_dopri5<State1>());
        odeint::integrate_adaptive(stepper, rhs, y, t1, t2, (t2 - t1) * 1e-4, [](const State1& s, double) {
            if (!(std::abs(s[0]) < 1e6)) throw RiccatiBlowup{};
        });
    } catch (const RiccatiBlowup&) {
        return linear_reference(q, t1, t2, lambda, tol);
    }
    OdeReference r = linear_reference(q, t1, t2, lambda, tol);
    r.qhat = y[0];
    r.used_linear_form = false;
    return r;
}

OdeReference ode_continuous_reference(const Signal& signal, double lambda, double tol) {
    const TimeGrid& g = signal.grid();
    return ode_continuous_reference([&](double t) { return interpolate(signal, t); }, g.t1(), g.t2(), lambda, tol);
}

cplx ode_a_reference(const PulseFunction& q, const PulseFunction& q_t, double t1, double t2, cplx lambda,
                     double tol) {
    auto rhs = [&](const State2& z, State2& dz, double t) {
        const cplx qv = q(t);
        if (std::abs(qv) < 1e-300) throw PoleError("q vanishes inside the window");
        dz[0] = z[1];
        dz[1] = (2.0 * kJ * lambda + q_t(t) / qv) * z[1] - std::norm(qv) * z[0];
    };
    State2 z{cplx(1.0), cplx(0.0)};
    auto stepper = odeint::make_controlled(tol * 1e-2, tol * 1e-2, odeint::runge_kutta_dopri5<State2>());
    odeint::integrate_adaptive(stepper, rhs, z, t1, t2, (t2 - t1) * 1e-4);
    return z[0];
}

}  // namespace nft
