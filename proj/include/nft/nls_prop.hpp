#ifndef NFT_NLS_PROP_HPP
#define NFT_NLS_PROP_HPP

#include <cstddef>

#include "nft/signal.hpp"
#include "nft/types.hpp"

namespace nft {

/// Propagation of j q_z = q_tt + 2|q|² q over `distance` in `steps` Strang
/// split steps on a periodic window `padding` times the signal length.
struct PropagationPlan {
    double distance = 0.0;
    std::size_t steps = 1;
    double padding = 2.0;
    /// Return the whole padded window instead of the original grid.
    bool keep_padding = false;
};

/// Throws std::invalid_argument unless steps >= 1, padding >= 1, distance >= 0.
void validate(const PropagationPlan& plan);

struct PropagationResult {
    Signal signal;
    /// Energy absorbed by the pad taper plus energy left in the pad, relative
    /// to the initial energy.
    double leakage = 0.0;
    /// leakage above 1e-6.
    bool leakage_warning = false;
};

/// Symmetric split step: half nonlinear rotation q e^{-2j|q|² dz/2}, full
/// linear step with the spectral multiplier e^{jω² dz} (basis e^{jωt}), half
/// nonlinear rotation. The outer half of each pad carries a raised-cosine
/// absorbing taper applied after every step.
PropagationResult ssf_propagate(const Signal& signal, const PropagationPlan& plan);

/// qhat0 e^{-4jλ² z}: continuous-spectrum evolution under the flow above.
cplx expected_continuous_evolution(cplx qhat0, double lambda, double z);

struct FiberParameters {
    double dispersion_ps_per_nm_km = 17.0;
    double gamma_per_w_km = 1.27;
    double wavelength_nm = 1550.0;
};

struct FiberScales {
    double beta2_ps2_per_km = 0.0;  // negative (anomalous dispersion)
    double t0_ps = 0.0;             // time unit
    double z_unit_km = 0.0;         // 2 T0² / |β2|
    double power_unit_w = 0.0;      // |β2| / (γ T0²)
};

/// Converts fiber parameters and a time unit to the normalized units of the
/// propagation equation (display only).
FiberScales fiber_scales(double t0_ps, const FiberParameters& fiber = {});

}  // namespace nft

#endif  // NFT_NLS_PROP_HPP
