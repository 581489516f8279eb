#include "nft/nls_prop.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace nft {

void validate(const PropagationPlan& plan) {
    if (plan.steps < 1) throw std::invalid_argument("propagation needs at least one step");
    if (!(plan.padding >= 1.0)) throw std::invalid_argument("padding factor must be >= 1");
    if (!(plan.distance >= 0.0)) throw std::invalid_argument("propagation distance must be non-negative");
}

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPair {
public:
    explicit FftPair(std::size_t n) : n_(n), buf_(n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        const int len = static_cast<int>(n);
        fwd_ = fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw Error("FFTW planning failed");
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    std::vector<cplx>& data() { return buf_; }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }

private:
    std::size_t n_;
    std::vector<cplx> buf_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

double energy(const std::vector<cplx>& q, std::size_t lo, std::size_t hi) {
    double e = 0.0;
    for (std::size_t i = lo; i < hi; ++i) e += std::norm(q[i]);
    return e;
}

}  // namespace

PropagationResult ssf_propagate(const Signal& signal, const PropagationPlan& plan) {
    validate(plan);
    const TimeGrid& g = signal.grid();
    const double eps = g.eps();
    const std::size_t nodes = signal.size();
    std::size_t total = static_cast<std::size_t>(std::ceil(plan.padding * static_cast<double>(nodes)));
    total = std::max(total, nodes);
    const std::size_t off = (total - nodes) / 2;
    const std::size_t right = total - nodes - off;

    FftPair fft(total);
    std::vector<cplx>& q = fft.data();
    std::fill(q.begin(), q.end(), cplx{});
    for (std::size_t k = 0; k < nodes; ++k) q[off + k] = signal[k];

    // Raised-cosine absorber on the outer half of each pad.
    std::vector<double> taper(total, 1.0);
    auto ramp = [&](std::size_t pad, std::size_t dist_from_signal) {
        const double inner = 0.5 * static_cast<double>(pad);
        const double d = static_cast<double>(dist_from_signal);
        if (d <= inner) return 1.0;
        const double s = (d - inner) / (static_cast<double>(pad) + 1.0 - inner);
        return 0.5 * (1.0 + std::cos(kPi * std::min(1.0, s)));
    };
    for (std::size_t i = 0; i < off; ++i) taper[i] = ramp(off, off - i);
    for (std::size_t i = 0; i < right; ++i) taper[off + nodes + i] = ramp(right, i + 1);

    const double e0 = energy(q, 0, total);
    const double dz = plan.distance / static_cast<double>(plan.steps);
    std::vector<cplx> lin(total);
    const double period = static_cast<double>(total) * eps;
    for (std::size_t k = 0; k < total; ++k) {
        const double ks = k <= total / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(total);
        const double w = 2.0 * kPi * ks / period;
        lin[k] = std::exp(kJ * w * w * dz) / static_cast<double>(total);
    }

    double absorbed = 0.0;
    if (plan.distance > 0.0) {
        for (std::size_t s = 0; s < plan.steps; ++s) {
            for (auto& v : q) v *= std::exp(-kJ * std::norm(v) * dz);  // e^{-2j|q|² dz/2}
            fft.forward();
            for (std::size_t k = 0; k < total; ++k) q[k] *= lin[k];
            fft.backward();
            for (auto& v : q) v *= std::exp(-kJ * std::norm(v) * dz);
            if (off + right > 0) {
                double before = 0.0;
                double after = 0.0;
                for (std::size_t i = 0; i < total; ++i) {
                    if (taper[i] < 1.0) {
                        before += std::norm(q[i]);
                        q[i] *= taper[i];
                        after += std::norm(q[i]);
                    }
                }
                absorbed += before - after;
            }
        }
    }

    const double pad_energy = energy(q, 0, off) + energy(q, off + nodes, total);
    PropagationResult res{signal, 0.0, false};
    res.leakage = e0 > 0.0 ? (absorbed + pad_energy) / e0 : 0.0;
    res.leakage_warning = res.leakage > 1e-6;
    if (plan.keep_padding) {
        const double t1 = g.t1() - static_cast<double>(off) * eps;
        const double t2 = t1 + static_cast<double>(total - 1) * eps;
        res.signal = Signal(TimeGrid(t1, t2, total - 1), q);
    } else {
        res.signal = Signal(g, std::vector<cplx>(q.begin() + static_cast<std::ptrdiff_t>(off),
                                                 q.begin() + static_cast<std::ptrdiff_t>(off + nodes)));
    }
    return res;
}

cplx expected_continuous_evolution(cplx qhat0, double lambda, double z) {
    return qhat0 * std::exp(-4.0 * kJ * lambda * lambda * z);
}

FiberScales fiber_scales(double t0_ps, const FiberParameters& fiber) {
    if (!(t0_ps > 0.0)) throw std::invalid_argument("time unit must be positive");
    constexpr double c_nm_per_ps = 299792.458;
    FiberScales s;
    s.t0_ps = t0_ps;
    s.beta2_ps2_per_km = -fiber.dispersion_ps_per_nm_km * fiber.wavelength_nm * fiber.wavelength_nm /
                         (2.0 * kPi * c_nm_per_ps);
    const double b2 = std::abs(s.beta2_ps2_per_km);
    s.z_unit_km = 2.0 * t0_ps * t0_ps / b2;
    s.power_unit_w = b2 / (fiber.gamma_per_w_km * t0_ps * t0_ps);
    return s;
}

}  // namespace nft
