#ifndef NFT_TESTS_SUPPORT_HPP
#define NFT_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "nft/signal.hpp"

namespace nft::test {

inline Signal pulse(PulseFamily family, cplx amp, double t1, double t2, long long n, double scale = 1.0) {
    PulseSpec s;
    s.family = family;
    s.amplitude = amp;
    s.scale = scale;
    return generate(s, make_grid(t1, t2, n));
}

inline Signal sech(double amp, double half_window, long long n) {
    return pulse(PulseFamily::sech, amp, -half_window, half_window, n);
}

inline Signal rect(double amp, long long n) { return pulse(PulseFamily::rect, amp, -1.0, 1.0, n); }

inline Signal zeros(double t1, double t2, long long n) {
    return Signal(make_grid(t1, t2, n), std::vector<cplx>(static_cast<std::size_t>(n) + 1, cplx{0.0, 0.0}));
}

/// Least-squares slope of log(err) against log(n).
inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace nft::test

#endif  // NFT_TESTS_SUPPORT_HPP
