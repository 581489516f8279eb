#ifndef NFT_CONTINUOUS_HPP
#define NFT_CONTINUOUS_HPP

#include <cstddef>
#include <vector>

#include "nft/signal.hpp"
#include "nft/steppers.hpp"
#include "nft/zs_core.hpp"

namespace nft {

/// Uniform real-λ mesh with m points on [lo, hi].
struct LambdaMesh {
    double lo = -20.0;
    double hi = 20.0;
    std::size_t m = 2001;

    double step() const { return (hi - lo) / static_cast<double>(m - 1); }
    double point(std::size_t i) const { return i + 1 == m ? hi : lo + static_cast<double>(i) * step(); }
    std::vector<double> points() const;
};

/// Validating factory; throws std::invalid_argument unless hi > lo and m >= 2.
LambdaMesh make_mesh(double lo, double hi, long long m);

struct ContinuousSpectrum {
    LambdaMesh mesh;
    std::vector<ContinuousSpectrumPoint> points;

    /// λ values where a(λ) vanished (q̂ undefined there).
    std::vector<double> poles() const;
};

/// q̂ = b/a at every mesh node, computed in parallel. A pole at a node marks
/// that point (pole = true, q̂ = 0) without affecting the others.
ContinuousSpectrum continuous_spectrum(const Signal& signal, Method method, const LambdaMesh& mesh,
                                       const PropagateOptions& opt = {});

struct SpectralEnergy {
    double value = 0.0;
    /// Integrand magnitude at both mesh ends is below the tail tolerance.
    bool tail_ok = true;
    /// Pole points left out of the integral.
    std::size_t excluded = 0;
};

/// (1/π) ∫ λ^{k-1} log(1 + |q̂|²) dλ by the trapezoid rule, k in 1..3.
SpectralEnergy spectral_energy(const ContinuousSpectrum& spectrum, int k, double tail_tol = 1e-8);

}  // namespace nft

#endif  // NFT_CONTINUOUS_HPP
