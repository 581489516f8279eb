#ifndef NFT_ORACLES_HPP
#define NFT_ORACLES_HPP

#include <functional>
#include <vector>

#include "nft/signal.hpp"
#include "nft/types.hpp"

namespace nft {

/// Γ(z) by the Lanczos approximation (g = 7, 9 coefficients) with the
/// reflection formula for Re z < 0.5. Throws PoleError at non-positive
/// integers.
cplx gamma_complex(cplx z);

/// A branch of log Γ(z); exp(log_gamma(z)) == Γ(z). Stays finite where Γ
/// itself would overflow.
cplx log_gamma(cplx z);

/// Continuous spectrum of q = A sech(t):
///   q̂ = -Γ(c + A) Γ(c - A) / Γ(c)² · sin(πA) / cosh(πλ),  c = 1/2 - jλ.
/// Exactly zero for integer A. Throws PoleError where a(λ) = 0 on the real axis.
cplx sy_continuous(double A, double lambda);

/// a(λ) = Γ(c)² / (Γ(c + A) Γ(c - A)) of q = A sech(t), valid in the closed
/// upper half plane.
cplx sy_a(double A, cplx lambda);

/// Discrete eigenvalues (A - 1/2 - m) j, m = 0 .. count - 1, count = ⌊A + 1/2 - 0⌋.
std::vector<cplx> sy_discrete(double A);

/// Continuous spectrum of q = A on [t1, t2], zero elsewhere:
///   q̂ = -A* s e^{-2jλ t2} / (cos(DT) - jλ s),  s = sin(DT)/D, D² = λ² + |A|², T = t2 - t1.
/// Throws PoleError when the denominator vanishes.
cplx rect_continuous(cplx A, double t1, double t2, double lambda);

/// a(λ) of the rectangle: (cos(DT) - jλ s) e^{jλT}.
cplx rect_a(cplx A, double t1, double t2, cplx lambda);

/// Root function on the imaginary axis λ = jη, 0 < η < |A|:
///   f(η) = cos(κT) + η sin(κT)/κ,  κ = sqrt(|A|² - η²).
double rect_root_function(double abs_a, double T, double eta);

/// All eigenvalues of the rectangle (purely imaginary), by a dense sign-change
/// scan of rect_root_function followed by bracketed refinement. Sorted by
/// decreasing imaginary part.
std::vector<cplx> rect_discrete(cplx A, double t1, double t2);

/// ⌊1/2 + l1/π - 0⌋: eigenvalue count of real, non-negative, single-lobe
/// potentials with L1 norm l1.
int klaus_shaw_count(double l1);

using PulseFunction = std::function<cplx(double)>;

struct OdeReference {
    cplx qhat{0.0, 0.0};
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
    /// True when the Riccati integration blew up and the linear form was used.
    bool used_linear_form = false;
};

/// Continuous spectrum of q on [t1, t2] by adaptive Dormand-Prince integration
/// (tolerance `tol`) of the Riccati equation
///   y' + q e^{2jλt} y² + q* e^{-2jλt} = 0,  y(t1) = 0,  q̂ = y(t2),
/// falling back to the equivalent linear system for (a, b) when y blows up.
OdeReference ode_continuous_reference(const PulseFunction& q, double t1, double t2, double lambda,
                                      double tol = 1e-10);

/// Same for a sampled signal, with q(t) reconstructed by cubic interpolation
/// (accuracy limited by the sampling).
OdeReference ode_continuous_reference(const Signal& signal, double lambda, double tol = 1e-10);

/// a(λ) from the second-order equation
///   z'' - (2jλ + q_t/q) z' + |q|² z = 0,  z(t1) = 1, z'(t1) = 0,  a = z(t2),
/// for q without zeros on [t1, t2]. q_t is supplied by the caller.
cplx ode_a_reference(const PulseFunction& q, const PulseFunction& q_t, double t1, double t2, cplx lambda,
                     double tol = 1e-10);

}  // namespace nft

#endif  // NFT_ORACLES_HPP
