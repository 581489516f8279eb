#include "nft/discrete_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "nft/csv_io.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace nft {

ComplexMatrix build_cd_matrix(const Signal& signal) {
    const auto q = signal.samples();
    const Eigen::Index N = static_cast<Eigen::Index>(q.size());
    const double h = 1.0 / (2.0 * signal.grid().eps());
    ComplexMatrix m = ComplexMatrix::Zero(2 * N, 2 * N);
    for (Eigen::Index k = 0; k < N; ++k) {
        const Eigen::Index up = (k + 1) % N;
        const Eigen::Index down = (k + N - 1) % N;
        m(k, up) += kJ * h;
        m(k, down) -= kJ * h;
        m(N + k, N + up) -= kJ * h;
        m(N + k, N + down) += kJ * h;
        m(k, N + k) = -kJ * q[static_cast<std::size_t>(k)];
        m(N + k, k) = -kJ * std::conj(q[static_cast<std::size_t>(k)]);
    }
    return m;
}

ComplexMatrix build_al_matrix(const Signal& signal, AlVariant variant) {
    const auto q = signal.samples();
    const double eps = signal.grid().eps();
    const Eigen::Index N = static_cast<Eigen::Index>(q.size());
    auto Q = [&](Eigen::Index k) { return q[static_cast<std::size_t>(k)] * eps; };
    auto alpha = [&](Eigen::Index k) { return 1.0 + std::norm(Q(k)); };
    ComplexMatrix m = ComplexMatrix::Zero(2 * N, 2 * N);
    for (Eigen::Index k = 0; k < N; ++k) {
        const Eigen::Index next = (k + 1) % N;
        const Eigen::Index prev = (k + N - 1) % N;
        m(k, N + k) = -Q(k);
        switch (variant) {
            case AlVariant::full:
                m(k, next) = 1.0;
                m(N + k, k) = -std::conj(Q(prev));
                m(N + k, N + prev) = alpha(prev);
                break;
            case AlVariant::simplified:
                m(k, next) = 1.0;
                m(N + k, k) = -std::conj(Q(k));
                m(N + k, N + prev) = 1.0;
                break;
            case AlVariant::normalized:
                m(k, next) = alpha(k);
                m(N + k, k) = -std::conj(Q(prev));
                m(N + k, N + prev) = 1.0;
                break;
        }
    }
    return m;
}

cplx fourier_coefficient(const Signal& signal, int k) {
    const TimeGrid& g = signal.grid();
    const double T = g.length();
    const double w = 2.0 * kPi * k / T;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) sum += signal[i] * std::exp(-kJ * w * g.node(i));
    return sum * g.eps() / T;
}

ComplexMatrix build_spectral_matrix(const Signal& signal, int M) {
    if (M < 2 || M % 2 != 0) throw std::invalid_argument("spectral mode count M must be even and >= 2");
    if (static_cast<std::size_t>(M) > signal.grid().n()) {
        throw std::invalid_argument("spectral mode count M must not exceed the sample count");
    }
    const int half = M / 2;
    const Eigen::Index K = M + 1;
    const double T = signal.grid().length();
    std::vector<cplx> gamma(static_cast<std::size_t>(2 * M + 1));
    for (int d = -M; d <= M; ++d) {
        gamma[static_cast<std::size_t>(d + M)] = std::abs(d) <= half ? fourier_coefficient(signal, d) : cplx{};
    }
    ComplexMatrix gam = ComplexMatrix::Zero(K, K);
    for (int k = -half; k <= half; ++k) {
        for (int m = -half; m <= half; ++m) {
            const int d = k - m;
            if (std::abs(d) <= half) gam(k + half, m + half) = -kJ * gamma[static_cast<std::size_t>(d + M)];
        }
    }
    ComplexMatrix a = ComplexMatrix::Zero(2 * K, 2 * K);
    for (int k = -half; k <= half; ++k) {
        const double omega = -2.0 * kPi * k / T;
        a(k + half, k + half) = omega;
        a(K + k + half, K + k + half) = -omega;
    }
    a.topRightCorner(K, K) = gam;
    a.bottomLeftCorner(K, K) = -gam.adjoint();
    return a;
}

std::vector<cplx> all_eigenvalues(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues need a square matrix");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return {};
    if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
    ComplexMatrix work = m;
    std::vector<cplx> w(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1, nullptr, 1);
    if (info > 0) {
        throw ConvergenceError("QR iteration failed to converge; eigenvalues 1.." + std::to_string(info) +
                               " not computed");
    }
    if (info < 0) throw Error("zgeev rejected argument " + std::to_string(-info));
    return w;
}

std::vector<MatrixCandidate> filter_physical(const std::vector<cplx>& eigs, const FilterPolicy& policy) {
    if (!(policy.im_threshold > 0.0)) throw std::invalid_argument("filter threshold must be positive");
    if (policy.domain == EigenDomain::z && !(policy.eps > 0.0)) {
        throw std::invalid_argument("z-domain filtering needs the sample step");
    }
    std::vector<MatrixCandidate> out;
    for (const cplx e : eigs) {
        cplx lambda = e;
        if (policy.domain == EigenDomain::z) {
            if (!(std::abs(e) > 1.0)) continue;
            lambda = kJ * std::log(e) / policy.eps;
        }
        if (!(lambda.imag() > policy.im_threshold)) continue;
        if (policy.strip && (lambda.real() < policy.strip->first || lambda.real() > policy.strip->second)) continue;
        MatrixCandidate c{lambda, false};
        if (policy.domain == EigenDomain::z) {
            c.wrap_risk = std::abs(lambda.real()) >= kPi / policy.eps - policy.wrap_margin;
        }
        out.push_back(c);
    }
    auto by_im = [](const auto& x, const auto& y) {
        if (x.lambda.imag() != y.lambda.imag()) return x.lambda.imag() > y.lambda.imag();
        return x.lambda.real() < y.lambda.real();
    };
    std::sort(out.begin(), out.end(), by_im);
    if (policy.merge_tol > 0.0) {
        std::vector<MatrixCandidate> merged;
        std::vector<cplx> sums;
        for (const auto& c : out) {
            bool joined = false;
            for (std::size_t i = 0; i < merged.size(); ++i) {
                if (std::abs(merged[i].lambda - c.lambda) < policy.merge_tol) {
                    sums[i] += c.lambda;
                    ++merged[i].merged;
                    merged[i].lambda = sums[i] / static_cast<double>(merged[i].merged);
                    merged[i].wrap_risk = merged[i].wrap_risk || c.wrap_risk;
                    joined = true;
                    break;
                }
            }
            if (!joined) {
                merged.push_back(c);
                sums.push_back(c.lambda);
            }
        }
        std::sort(merged.begin(), merged.end(), by_im);
        out = std::move(merged);
    }
    return out;
}

std::string to_string(MatrixMethod m) {
    switch (m) {
        case MatrixMethod::central_difference: return "cd";
        case MatrixMethod::al: return "al";
        case MatrixMethod::al_simplified: return "al-simple";
        case MatrixMethod::al_normalized: return "al-norm";
        case MatrixMethod::spectral: return "spectral";
    }
    return "unknown";
}

MatrixMethod parse_matrix_method(std::string_view name) {
    std::string s(name);
    for (char& c : s) {
        if (c == '_') c = '-';
    }
    if (s == "cd" || s == "central" || s == "central-difference") return MatrixMethod::central_difference;
    if (s == "al" || s == "al1") return MatrixMethod::al;
    if (s == "al-simple" || s == "al-simplified") return MatrixMethod::al_simplified;
    if (s == "al-norm" || s == "al-normalized" || s == "al2") return MatrixMethod::al_normalized;
    if (s == "spectral") return MatrixMethod::spectral;
    throw std::invalid_argument("unknown matrix method '" + std::string(name) + "'");
}

FilterPolicy default_policy(const Signal& signal, MatrixMethod method) {
    FilterPolicy p;
    p.im_threshold = 0.02 * std::max(1.0, conserved(signal, 1) / 4.0);
    p.eps = signal.grid().eps();
    if (method == MatrixMethod::central_difference) p.merge_tol = 1e-2;
    if (method == MatrixMethod::al || method == MatrixMethod::al_simplified ||
        method == MatrixMethod::al_normalized) {
        const double edge = kPi / (2.0 * p.eps);
        p.domain = EigenDomain::z;
        p.strip = std::make_pair(-edge, edge);
        p.wrap_margin = 0.05 * kPi / p.eps;
    }
    return p;
}

int default_spectral_modes(const Signal& signal) {
    const auto n = static_cast<int>(std::min<std::size_t>(signal.grid().n(), 256));
    return n - n % 2;
}

ComplexMatrix build_matrix(const Signal& signal, MatrixMethod method, int spectral_modes) {
    switch (method) {
        case MatrixMethod::central_difference: return build_cd_matrix(signal);
        case MatrixMethod::al: return build_al_matrix(signal, AlVariant::full);
        case MatrixMethod::al_simplified: return build_al_matrix(signal, AlVariant::simplified);
        case MatrixMethod::al_normalized: return build_al_matrix(signal, AlVariant::normalized);
        case MatrixMethod::spectral: return build_spectral_matrix(signal, spectral_modes);
    }
    throw std::invalid_argument("unknown matrix method");
}

std::vector<MatrixCandidate> matrix_eigenvalues(const Signal& signal, MatrixMethod method,
                                                std::optional<FilterPolicy> policy, std::optional<int> spectral_modes) {
    const ComplexMatrix m = build_matrix(signal, method, spectral_modes.value_or(default_spectral_modes(signal)));
    return filter_physical(all_eigenvalues(m), policy.value_or(default_policy(signal, method)));
}

void dump_matrix(std::ostream& out, const ComplexMatrix& m) {
    out << m.rows() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag()) << '\n';
        }
    }
}

}  // namespace nft
