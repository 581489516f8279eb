#include "nft/continuous.hpp"

#include <cmath>
#include <stdexcept>

#include "nft/parallel.hpp"

namespace nft {

std::vector<double> LambdaMesh::points() const {
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = point(i);
    return out;
}

LambdaMesh make_mesh(double lo, double hi, long long m) {
    if (!(hi > lo)) throw std::invalid_argument("lambda mesh needs hi > lo");
    if (m < 2) throw std::invalid_argument("lambda mesh needs at least 2 points");
    return LambdaMesh{lo, hi, static_cast<std::size_t>(m)};
}

std::vector<double> ContinuousSpectrum::poles() const {
    std::vector<double> out;
    for (const auto& p : points) {
        if (p.pole) out.push_back(p.lambda);
    }
    return out;
}

ContinuousSpectrum continuous_spectrum(const Signal& signal, Method method, const LambdaMesh& mesh,
                                       const PropagateOptions& opt) {
    ContinuousSpectrum out{mesh, std::vector<ContinuousSpectrumPoint>(mesh.m)};
    PropagateOptions o = opt;
    o.with_derivative = false;
    parallel_for(mesh.m, [&](std::size_t i) {
        const double lambda = mesh.point(i);
        const ScatteringCoefficients c = propagate(method, signal, cplx(lambda, 0.0), o);
        ContinuousSpectrumPoint& p = out.points[i];
        p.lambda = lambda;
        p.a = c.a;
        p.b = c.b;
        if (!c.finite() || !(std::abs(c.a) >= kPoleThreshold)) {
            p.pole = true;
            p.qhat = 0.0;
        } else {
            p.qhat = c.b / c.a;
        }
    });
    return out;
}

SpectralEnergy spectral_energy(const ContinuousSpectrum& spectrum, int k, double tail_tol) {
    if (k < 1 || k > 3) throw std::invalid_argument("spectral energy order must be 1, 2 or 3");
    const auto& pts = spectrum.points;
    SpectralEnergy e;
    if (pts.size() < 2) return e;
    auto integrand = [k](const ContinuousSpectrumPoint& p) {
        return std::pow(p.lambda, k - 1) * std::log1p(std::norm(p.qhat)) / kPi;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto& l = pts[i];
        const auto& r = pts[i + 1];
        if (l.pole || r.pole) continue;
        sum += 0.5 * (r.lambda - l.lambda) * (integrand(l) + integrand(r));
    }
    for (const auto& p : pts) e.excluded += p.pole ? 1 : 0;
    e.value = sum;
    e.tail_ok = std::abs(integrand(pts.front())) < tail_tol && std::abs(integrand(pts.back())) < tail_tol;
    return e;
}

}  // namespace nft
