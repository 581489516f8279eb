#ifndef NFT_DISCRETE_MATRIX_HPP
#define NFT_DISCRETE_MATRIX_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nft/signal.hpp"
#include "nft/types.hpp"

namespace nft {

using ComplexMatrix = Eigen::MatrixXcd;

/// j [[D, -diag(q)], [-diag(q*), -D]] with D the cyclic central-difference
/// matrix (first row (0, 1, 0, ..., 0, -1)/(2 eps)); order 2(n+1). Its
/// eigenvalues approximate λ.
ComplexMatrix build_cd_matrix(const Signal& signal);

enum class AlVariant {
    full,        // [[U1, -diag(Q[k])], [-diag(Q*[k-1]), U2ᵀ]], U2 carrying α[k] = 1 + |Q[k]|²
    simplified,  // α dropped: U2 := U1 and Q*[k-1] replaced by Q*[k]
    normalized   // U1 and U2 interchanged: α on the forward shift
};

/// Ablowitz-Ladik eigenproblem L v = z v with Q[k] = eps q[k] and cyclic
/// shifts; order 2(n+1). Eigenvalues are in the z domain, z = e^{-jλ eps}.
ComplexMatrix build_al_matrix(const Signal& signal, AlVariant variant);

/// Fourier-Galerkin matrix [[Ω, Γ], [-Γᴴ, -Ω]] with M + 1 modes
/// k = -M/2..M/2 over the period T = t2 - t1: Ω = -(2π/T) diag(k),
/// Γ[k, m] = -j γ[k - m] for |k - m| <= M/2, γ the Fourier coefficients of q by
/// a rectangle-rule sum over the n samples. Eigenvalues approximate λ.
/// M must be even, 2 <= M <= n.
ComplexMatrix build_spectral_matrix(const Signal& signal, int M);

/// Fourier coefficients γ[k] = (eps/T) Σ_{i<n} q[i] e^{-j 2πk t_i / T}.
cplx fourier_coefficient(const Signal& signal, int k);

/// All eigenvalues of a general complex matrix (LAPACK zgeev: balancing,
/// Hessenberg reduction, shifted QR). Throws ConvergenceError on failure.
std::vector<cplx> all_eigenvalues(const ComplexMatrix& m);

enum class EigenDomain { lambda, z };

struct FilterPolicy {
    double im_threshold = 0.02;
    std::optional<std::pair<double, double>> strip;  // kept Re λ interval
    EigenDomain domain = EigenDomain::lambda;
    double eps = 0.0;          // sample step, needed for the z -> λ map
    double wrap_margin = 0.0;  // |Re λ| >= π/eps - margin is flagged
    /// Candidates closer than this are merged into one (their mean). The
    /// central-difference matrix produces every eigenvalue twice (a smooth
    /// mode and an alternating-sign partner); 0 disables merging.
    double merge_tol = 0.0;
};

struct MatrixCandidate {
    cplx lambda{0.0, 0.0};
    bool wrap_risk = false;
    int merged = 1;  // raw eigenvalues represented by this candidate
};

/// z inputs are mapped by λ = (j/eps) Log z keeping |z| > 1; then Im λ >
/// im_threshold and the optional strip on Re λ. Sorted by decreasing Im λ.
std::vector<MatrixCandidate> filter_physical(const std::vector<cplx>& eigs, const FilterPolicy& policy);

enum class MatrixMethod { central_difference, al, al_simplified, al_normalized, spectral };

std::string to_string(MatrixMethod m);
/// Accepts cd, al, al-simple, al-norm, spectral (and the enum names).
MatrixMethod parse_matrix_method(std::string_view name);

/// im_threshold = 0.02 max(1, E1/4); central difference merges within 1e-2;
/// AL variants use the z domain with the
/// strip |Re λ| <= π/(2 eps) and a wrap margin of 5% of π/eps.
FilterPolicy default_policy(const Signal& signal, MatrixMethod method);

ComplexMatrix build_matrix(const Signal& signal, MatrixMethod method, int spectral_modes);

/// Default number of Fourier modes: the largest even M <= min(n, 256).
int default_spectral_modes(const Signal& signal);

/// Builds the matrix and returns its filtered eigenvalues.
std::vector<MatrixCandidate> matrix_eigenvalues(const Signal& signal, MatrixMethod method,
                                                std::optional<FilterPolicy> policy = std::nullopt,
                                                std::optional<int> spectral_modes = std::nullopt);

/// Text dump: the order d on the first line, then d² lines `re,im` in
/// row-major order.
void dump_matrix(std::ostream& out, const ComplexMatrix& m);

}  // namespace nft

#endif  // NFT_DISCRETE_MATRIX_HPP
