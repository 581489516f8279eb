#ifndef NFT_DISCRETE_SEARCH_HPP
#define NFT_DISCRETE_SEARCH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nft/continuous.hpp"
#include "nft/signal.hpp"
#include "nft/steppers.hpp"
#include "nft/zs_core.hpp"

namespace nft {

/// Rectangle in the upper half plane.
struct SearchRegion {
    double re_lo = -10.0;
    double re_hi = 10.0;
    double im_lo = 0.01;
    double im_hi = 10.0;

    bool contains(cplx z) const {
        return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
    }
};

/// Throws std::invalid_argument unless re_hi > re_lo and im_hi > im_lo > 0.
void validate(const SearchRegion& region);

struct NewtonOptions {
    double alpha = 1.0;       // step modifier
    double delta = 1e-12;     // stop when |Δλ| < delta
    int max_iter = 100;
    std::optional<SearchRegion> region;  // default_region(signal) when unset
    std::uint64_t rng_seed = 1;
    int max_restarts = 8;     // random restarts after leaving the region
    PropagateOptions propagate;  // with_derivative is forced on
    /// Known zeros divided out of a(λ): the iteration runs on
    /// a(λ) / Π(λ - λ_i), steering it away from eigenvalues already found.
    std::vector<cplx> deflate;
};

/// re in ±max(10, 2·bandwidth), im in [0.01, 1.2·E1/4 + 1]. The bandwidth is
/// the RMS spread of the signal in λ units, capped at the grid Nyquist limit.
SearchRegion default_region(const Signal& signal);

enum class NewtonStatus { converged, max_iter, degenerate, left_region, non_finite };

std::string to_string(NewtonStatus status);

struct NewtonResult {
    NewtonStatus status = NewtonStatus::max_iter;
    DiscreteEigenvalue eigenvalue;  // valid when converged
    cplx last{0.0, 0.0};            // last iterate
    cplx a_prime{0.0, 0.0};         // a'(λ) at the last iterate
    int iterations = 0;             // total over all restarts
    int restarts = 0;
    std::vector<cplx> iterates;     // of the final chain, starting point first

    bool converged() const { return status == NewtonStatus::converged; }
};

/// λ ← λ - α a(λ)/a'(λ) (deflated when opts.deflate is set). Converges on |Δλ| < delta, or when |Δλ| has reached
/// the rounding floor (below 1e-10 max(1, |λ|) and no longer shrinking).
/// Leaving the region restarts from a seeded random point of the region.
NewtonResult newton_refine(const Signal& signal, Method method, cplx lambda0, const NewtonOptions& opts = {});

struct TraceReport {
    std::array<double, 3> e_time{};
    std::array<double, 3> e_cont{};
    std::array<double, 3> e_disc{};
    std::array<double, 3> residual{};
};

/// e_disc[k] = (4/k) Σ Im(λ^k), residual[k] = |e_time[k] - e_cont[k] - e_disc[k]|.
TraceReport trace_residual(const std::array<double, 3>& e_time, const std::array<double, 3>& e_cont,
                           std::span<const DiscreteEigenvalue> eigs);

struct SearchOptions {
    double stop_relative = 1e-2;  // stop when residual[1] < stop_relative · E1
    int draw_budget = 200;
    double dedup_tol = 1e-6;
    /// Draws evaluated together before the stopping test. Fixed (not tied to
    /// the worker count) so results do not depend on the thread count.
    int batch = 8;
    /// Start the first draws at local minima of |a| on the real mesh (a zero
    /// at λ0 + jδ leaves a dip of depth about |a'| δ at λ0) before drawing
    /// uniformly. Dips closest to the axis come first, each tried at three
    /// heights. At most this many seeds are used; 0 disables them.
    int mesh_seeds = 48;
};

struct SearchResult {
    std::vector<DiscreteEigenvalue> eigenvalues;  // sorted by decreasing Im, then Re
    TraceReport trace;
    ContinuousSpectrum continuous;
    SearchRegion region;
    std::array<SpectralEnergy, 3> energy{};
    int draws = 0;
    bool complete = false;  // trace residual closed below the threshold
    /// Zeros with Im λ at or below this are reported as spurious
    /// (0.02 max(1, E1/4), the matrix-filter default).
    double physical_threshold = 0.02;

    /// Eigenvalues with Im λ above physical_threshold. All zeros found,
    /// spurious ones included, enter the trace report.
    std::vector<DiscreteEigenvalue> physical() const;
};

/// Random-restart Newton search driven by the trace-formula energy budget.
/// Each batch of draws deflates the eigenvalues found by earlier batches.
/// Starting points: mesh seeds (see SearchOptions::mesh_seeds), then uniform.
/// Starting points above the real-axis dips of |a| of a computed spectrum:
/// for each dip the zero height is estimated as |a| / |a'|, dips are ordered
/// by that estimate and each yields starts at 1, 0.3 and 3 times it.
std::vector<cplx> mesh_seeds(const ContinuousSpectrum& spectrum, const SearchRegion& region, std::size_t limit);

SearchResult find_eigenvalues(const Signal& signal, Method method, const NewtonOptions& opts, const LambdaMesh& mesh,
                              const SearchOptions& search = {});

}  // namespace nft

#endif  // NFT_DISCRETE_SEARCH_HPP
