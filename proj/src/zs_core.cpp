#include "nft/zs_core.hpp"

#include <cmath>
#include <stdexcept>

namespace nft {

namespace {
bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}  // namespace

JostState jost_initial(cplx lambda, double t1, bool with_derivative) {
    const cplx e = std::exp(-kJ * lambda * t1);
    JostState s{e, cplx{0.0, 0.0}, std::nullopt, std::nullopt};
    if (with_derivative) {
        s.dv1 = -kJ * t1 * e;
        s.dv2 = cplx{0.0, 0.0};
    }
    return s;
}

bool ScatteringCoefficients::finite() const {
    return is_finite(a) && is_finite(b) && (!a_prime || is_finite(*a_prime)) && (!b_prime || is_finite(*b_prime));
}

ScatteringCoefficients coefficients_from_terminal(const JostState& v, const TimeGrid& grid, cplx lambda) {
    const double t2 = grid.t2();
    const cplx up = std::exp(kJ * lambda * t2);
    const cplx down = std::exp(-kJ * lambda * t2);
    ScatteringCoefficients c;
    c.lambda = lambda;
    c.a = v.v1 * up;
    c.b = v.v2 * down;
    if (v.dv1) c.a_prime = (*v.dv1 + kJ * t2 * v.v1) * up;
    if (v.dv2) c.b_prime = (*v.dv2 - kJ * t2 * v.v2) * down;
    return c;
}

cplx continuous_amplitude(const ScatteringCoefficients& c) {
    if (!(std::abs(c.a) >= kPoleThreshold)) {
        throw PoleError("a(lambda) vanishes at lambda = " + std::to_string(c.lambda.real()) + "; spectral pole");
    }
    return c.b / c.a;
}

cplx discrete_amplitude(const ScatteringCoefficients& c, double degenerate_tol) {
    if (!c.a_prime) throw std::invalid_argument("discrete amplitude needs a'(lambda)");
    if (!(std::abs(*c.a_prime) > degenerate_tol)) {
        throw DegenerateError("a'(lambda) vanishes: multiple zero of a(lambda)");
    }
    return c.b / *c.a_prime;
}

}  // namespace nft
