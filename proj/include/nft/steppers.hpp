#ifndef NFT_STEPPERS_HPP
#define NFT_STEPPERS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "nft/signal.hpp"
#include "nft/types.hpp"
#include "nft/zs_core.hpp"

namespace nft {

/// Transfer schemes for the Zakharov-Shabat system v_t = P(t, λ) v with
/// P = [[-jλ, q], [-q*, jλ]].
enum class Method { euler, central, rk4, crank_nicolson, layer_peeling, al1, al2 };

inline constexpr std::array<Method, 7> kAllMethods{Method::euler,         Method::central, Method::rk4,
                                                   Method::crank_nicolson, Method::layer_peeling,
                                                   Method::al1,           Method::al2};

std::string to_string(Method m);
/// Accepts the canonical names plus dashed spellings ("layer-peeling",
/// "crank-nicolson") and "cn", "lp".
Method parse_method(std::string_view name);

/// Jost: the state is the eigenvector v[k].
/// Normalized: the state is u[k] = diag(e^{jλt_k}, e^{-jλt_k}) v[k], i.e. the
/// running coefficients (a[k], b[k]); starts at (1, 0) and ends at (a, b).
enum class Frame { jost, normalized };

struct TransferState {
    Frame frame = Frame::jost;
    Vec2 v = Vec2(1.0, 0.0);
    Vec2 dv = Vec2::Zero();
    Vec2 v_prev = Vec2::Zero();  // previous node, central difference only
    Vec2 dv_prev = Vec2::Zero();
    std::size_t k = 0;
    bool with_derivative = false;
};

/// Signal values a step needs. q_mid is q(t_k + eps/2), used by rk4 only.
struct StepSamples {
    cplx q_k{0.0, 0.0};
    cplx q_next{0.0, 0.0};
    cplx q_mid{0.0, 0.0};
};

struct StepOptions {
    /// Divide the forward-Euler matrix by sqrt(det) (euler only).
    bool euler_normalized = false;
};

/// One-step update matrix A[k] (v[k+1] = A v[k]) in the Jost frame and its
/// λ-derivative. For the central scheme this is the increment matrix 2 eps P[k]
/// of v[k+1] = v[k-1] + 2 eps P[k] v[k].
struct StepMatrix {
    Mat2 a;
    Mat2 da;
};

Mat2 zs_matrix(cplx q, cplx lambda);

StepMatrix step_matrix(Method method, const StepSamples& s, cplx lambda, double eps, const StepOptions& opt = {});

/// Re-expresses a Jost-frame matrix acting from t_from to t_to in the
/// normalized frame: E(t_to) A E(t_from)^{-1}, E(t) = diag(e^{jλt}, e^{-jλt}).
StepMatrix to_normalized(const StepMatrix& m, cplx lambda, double t_from, double t_to);

/// Layer-peeling factors of one slab holding the constant value q (propagation
/// uses the mean of the slab's end samples), with or without the
/// per-step phase factors e^{jλeps}, e^{-jλ(t_k + t_{k+1})}. The barred
/// factors satisfy xbar(λ) = conj(x(conj λ)), ybar(λ) = conj(y(conj λ)).
struct LayerFactors {
    cplx x, y, xbar, ybar;
    cplx dx, dy, dxbar, dybar;
};

LayerFactors layer_factors(cplx q, cplx lambda, double eps, double t_k, double t_next, bool with_phase);

/// Initial state at t[0] = T1 for the given frame.
TransferState initial_state(Frame frame, cplx lambda, const TimeGrid& grid, bool with_derivative);

/// Advances the state from t[k] to t[k+1] (state.k is incremented).
TransferState step(Method method, const TransferState& state, const StepSamples& s, cplx lambda, const TimeGrid& grid,
                   const StepOptions& opt = {});

/// Same as step but also carries the λ-derivative (state.with_derivative
/// must be set).
TransferState step_aug(Method method, const TransferState& state, const StepSamples& s, cplx lambda,
                       const TimeGrid& grid, const StepOptions& opt = {});

/// Samples for the step k -> k+1; q_mid by four-point cubic interpolation.
StepSamples step_samples(std::span<const cplx> q, std::size_t k);

enum class FramePolicy {
    automatic,  // normalized when Im λ (T2 - T1) > kNormalizeThreshold or layer-peeling
    jost,
    normalized
};

enum class LayerPhase {
    per_step,    // phase factors kept inside every slab
    telescoped   // phase-free slabs, final rescale by e^{jλ(T2-T1)}, e^{-jλ(T2+T1)}
};

inline constexpr double kNormalizeThreshold = 30.0;

struct PropagateOptions {
    bool with_derivative = false;
    FramePolicy frame = FramePolicy::automatic;
    StepOptions step;
    LayerPhase layer_phase = LayerPhase::per_step;
};

Frame choose_frame(Method method, cplx lambda, const TimeGrid& grid, FramePolicy policy);

/// Runs the method across the whole signal for one λ. A non-finite result
/// (overflow) is returned as is; check ScatteringCoefficients::finite().
ScatteringCoefficients propagate(Method method, const Signal& signal, cplx lambda, const PropagateOptions& opt = {});

}  // namespace nft

#endif  // NFT_STEPPERS_HPP
