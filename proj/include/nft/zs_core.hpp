#ifndef NFT_ZS_CORE_HPP
#define NFT_ZS_CORE_HPP

#include <optional>

#include "nft/signal.hpp"
#include "nft/types.hpp"

namespace nft {

/// Jost vector v(t, λ) and optionally its λ-derivative.
struct JostState {
    cplx v1{1.0, 0.0};
    cplx v2{0.0, 0.0};
    std::optional<cplx> dv1;
    std::optional<cplx> dv2;
};

/// v(T1, λ) = (1, 0) e^{-jλT1}; with derivative v'(T1, λ) = (-jT1, 0) e^{-jλT1}.
JostState jost_initial(cplx lambda, double t1, bool with_derivative);

/// Nonlinear Fourier coefficients a(λ), b(λ) and optionally a'(λ), b'(λ).
struct ScatteringCoefficients {
    cplx lambda{0.0, 0.0};
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    std::optional<cplx> a_prime;
    std::optional<cplx> b_prime;

    bool finite() const;
};

struct ContinuousSpectrumPoint {
    double lambda = 0.0;
    cplx qhat{0.0, 0.0};
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    bool pole = false;
};

struct DiscreteEigenvalue {
    cplx lambda{0.0, 0.0};
    cplx qtilde{0.0, 0.0};
    double residual = 0.0;
    int multiplicity_hint = 1;
};

inline constexpr double kPoleThreshold = 1e-300;

/// a = v1 e^{jλT2}, b = v2 e^{-jλT2}, a' = (v1' + jT2 v1) e^{jλT2} from the
/// state at t[n] = T2.
ScatteringCoefficients coefficients_from_terminal(const JostState& v, const TimeGrid& grid, cplx lambda);

/// q̂ = b / a. Throws PoleError when |a| < 1e-300.
cplx continuous_amplitude(const ScatteringCoefficients& c);

/// q̃ = b / a'. Throws std::invalid_argument without a', DegenerateError
/// when a' vanishes.
cplx discrete_amplitude(const ScatteringCoefficients& c, double degenerate_tol = 1e-300);

}  // namespace nft

#endif  // NFT_ZS_CORE_HPP
