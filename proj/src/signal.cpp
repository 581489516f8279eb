#include "nft/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nft/csv_io.hpp"

namespace nft {

TimeGrid::TimeGrid(double t1, double t2, std::size_t n)
    : t1_(t1), t2_(t2), n_(n), eps_((t2 - t1) / static_cast<double>(n)) {
    if (!(t2 > t1) || !std::isfinite(t1) || !std::isfinite(t2)) {
        throw std::invalid_argument("time grid requires finite t2 > t1");
    }
    if (n < 2) {
        throw std::invalid_argument("time grid requires n >= 2 intervals");
    }
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> t(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) t[k] = node(k);
    return t;
}

TimeGrid make_grid(double t1, double t2, long long n) {
    if (n < 2) throw std::invalid_argument("time grid requires n >= 2 intervals");
    return TimeGrid(t1, t2, static_cast<std::size_t>(n));
}

Signal::Signal(TimeGrid grid, std::vector<cplx> samples) : grid_(grid), q_(std::move(samples)) {
    if (q_.size() != grid_.n() + 1) {
        throw std::invalid_argument("signal needs n + 1 samples, got " + std::to_string(q_.size()) +
                                    " for n = " + std::to_string(grid_.n()));
    }
    for (const cplx& v : q_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("signal samples must be finite");
        }
    }
}

std::string to_string(PulseFamily family) {
    switch (family) {
        case PulseFamily::sech: return "sech";
        case PulseFamily::rect: return "rect";
        case PulseFamily::sinc: return "sinc";
        case PulseFamily::gaussian: return "gaussian";
        case PulseFamily::raised_cosine: return "raised_cosine";
        case PulseFamily::wavetrain: return "wavetrain";
        case PulseFamily::file: return "file";
    }
    return "unknown";
}

PulseFamily parse_family(const std::string& name) {
    if (name == "sech") return PulseFamily::sech;
    if (name == "rect") return PulseFamily::rect;
    if (name == "sinc") return PulseFamily::sinc;
    if (name == "gaussian" || name == "gauss") return PulseFamily::gaussian;
    if (name == "raised_cosine" || name == "raised-cosine" || name == "rc") return PulseFamily::raised_cosine;
    if (name == "wavetrain" || name == "train") return PulseFamily::wavetrain;
    if (name == "file") return PulseFamily::file;
    throw std::invalid_argument("unknown pulse family '" + name + "'");
}

void validate(const PulseSpec& spec) {
    if (spec.family == PulseFamily::file) {
        if (spec.path.empty()) throw std::invalid_argument("file pulse needs a path");
        return;
    }
    if (!(spec.scale > 0.0)) throw std::invalid_argument("pulse scale must be positive");
    if (spec.family == PulseFamily::wavetrain) {
        if (spec.train.empty()) throw std::invalid_argument("wavetrain needs at least one component");
        if (spec.train_base == PulseFamily::wavetrain || spec.train_base == PulseFamily::file) {
            throw std::invalid_argument("wavetrain base must be an analytic family");
        }
    }
    const bool uses_rolloff = spec.family == PulseFamily::raised_cosine ||
                              (spec.family == PulseFamily::wavetrain && spec.train_base == PulseFamily::raised_cosine);
    if (uses_rolloff && !(spec.rolloff >= 0.0 && spec.rolloff <= 1.0)) {
        throw std::invalid_argument("raised-cosine roll-off must lie in [0, 1]");
    }
}

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 6.0;
    return std::sin(kPi * x) / (kPi * x);
}

PulseFamily effective_base(const PulseSpec& spec) {
    return spec.family == PulseFamily::wavetrain ? spec.train_base : spec.family;
}

cplx unmodulated(const PulseSpec& spec, double t) {
    if (spec.family != PulseFamily::wavetrain) {
        return cplx(base_shape(spec.family, spec.scale * t, spec.rolloff), 0.0);
    }
    cplx sum{0.0, 0.0};
    for (const auto& c : spec.train) {
        sum += c.amplitude * base_shape(spec.train_base, spec.scale * (t - c.delay), spec.rolloff);
    }
    return sum;
}

double energy_centre(const PulseSpec& spec) {
    if (spec.family != PulseFamily::wavetrain) return 0.0;
    double w = 0.0, m = 0.0;
    for (const auto& c : spec.train) {
        w += std::norm(c.amplitude);
        m += std::norm(c.amplitude) * c.delay;
    }
    return w > 0.0 ? m / w : 0.0;
}

// Average of |q|^2 t^2 for large |t| (sinc-like algebraic tails).
double tail_coefficient(const PulseSpec& spec) {
    if (effective_base(spec) != PulseFamily::sinc) return 0.0;
    const double a = spec.scale;
    const double amp2 = std::norm(spec.amplitude);
    if (spec.family != PulseFamily::wavetrain) return amp2 / (2.0 * kPi * kPi * a * a);
    cplx s1{0.0, 0.0}, s2{0.0, 0.0};
    for (const auto& c : spec.train) {
        const double phi = kPi * a * c.delay;
        s1 += c.amplitude * std::exp(-kJ * phi);
        s2 += c.amplitude * std::exp(kJ * phi);
    }
    return amp2 * (std::norm(s1) + std::norm(s2)) / (4.0 * kPi * kPi * a * a);
}

double interval_energy(const PulseSpec& spec, double lo, double hi) {
    if (hi <= lo) return 0.0;
    auto f = [&](double t) { return std::norm(evaluate(spec, t)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 10, 1e-13);
}

}  // namespace

double base_shape(PulseFamily family, double x, double rolloff) {
    switch (family) {
        case PulseFamily::sech: return 1.0 / std::cosh(x);
        case PulseFamily::rect: return std::abs(x) <= 1.0 ? 1.0 : 0.0;
        case PulseFamily::sinc: return sinc(x);
        case PulseFamily::gaussian: return std::exp(-x * x);
        case PulseFamily::raised_cosine: {
            const double d = 2.0 * rolloff * x;
            if (std::abs(1.0 - d * d) < 1e-10) return 0.25 * kPi * sinc(1.0 / (2.0 * rolloff));
            return sinc(x) * std::cos(kPi * rolloff * x) / (1.0 - d * d);
        }
        case PulseFamily::wavetrain:
        case PulseFamily::file: break;
    }
    throw std::invalid_argument("base_shape needs an analytic family");
}

cplx evaluate(const PulseSpec& spec, double t) {
    if (spec.family == PulseFamily::file) throw std::invalid_argument("file pulses have no analytic form");
    const cplx modulation = spec.amplitude * std::exp(kJ * (spec.phase - spec.linear_chirp * t + spec.quad_chirp * t * t));
    return unmodulated(spec, t) * modulation;
}

std::pair<double, double> auto_window(const PulseSpec& spec, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("energy fraction must lie in (0, 1)");
    validate(spec);
    if (spec.family == PulseFamily::file) throw std::invalid_argument("file pulses carry their own window");
    if (std::abs(spec.amplitude) == 0.0) return {-1.0, 1.0};
    if (spec.family == PulseFamily::wavetrain &&
        std::all_of(spec.train.begin(), spec.train.end(), [](const auto& c) { return std::abs(c.amplitude) == 0.0; })) {
        return {-1.0, 1.0};
    }

    const double centre = energy_centre(spec);
    const double half_support = 1.0 / spec.scale;
    if (effective_base(spec) == PulseFamily::rect) {
        if (spec.family != PulseFamily::wavetrain) return {-half_support, half_support};
        double lo = spec.train.front().delay, hi = lo;
        for (const auto& c : spec.train) {
            lo = std::min(lo, c.delay);
            hi = std::max(hi, c.delay);
        }
        return {lo - half_support, hi + half_support};
    }

    // Symmetric shells [c + jh, c + (j+1)h] u [c - (j+1)h, c - jh].
    double span = 0.0;
    if (spec.family == PulseFamily::wavetrain) {
        for (const auto& c : spec.train) span = std::max(span, std::abs(c.delay - centre));
    }
    const double h = 0.25 / spec.scale;
    const bool algebraic_tail = effective_base(spec) == PulseFamily::sinc || effective_base(spec) == PulseFamily::raised_cosine;
    const double reach = span + (algebraic_tail ? 4000.0 : 80.0) / spec.scale;
    const auto shells = static_cast<std::size_t>(std::ceil(reach / h));

    std::vector<double> cumulative(shells);
    double acc = 0.0;
    for (std::size_t j = 0; j < shells; ++j) {
        const double r0 = static_cast<double>(j) * h, r1 = r0 + h;
        acc += interval_energy(spec, centre + r0, centre + r1) + interval_energy(spec, centre - r1, centre - r0);
        cumulative[j] = acc;
    }
    const double outer = static_cast<double>(shells) * h;
    const double total = acc + 2.0 * tail_coefficient(spec) / outer;
    const double target = fraction * total;

    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) return {centre - outer, centre + outer};
    const auto j = static_cast<std::size_t>(it - cumulative.begin());
    const double inner = static_cast<double>(j) * h;
    const double before = j == 0 ? 0.0 : cumulative[j - 1];

    double lo = inner, hi = inner + h;
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        const double e = before + interval_energy(spec, centre + inner, centre + mid) +
                         interval_energy(spec, centre - mid, centre - inner);
        (e >= target ? hi : lo) = mid;
    }
    return {centre - hi, centre + hi};
}

Signal generate(const PulseSpec& spec, const TimeGrid& grid) {
    validate(spec);
    if (spec.family == PulseFamily::file) {
        Signal loaded = read_signal_csv(spec.path);
        const TimeGrid& g = loaded.grid();
        const double tol = 1e-9 * std::max(1.0, grid.length());
        if (g.n() != grid.n() || std::abs(g.t1() - grid.t1()) > tol || std::abs(g.t2() - grid.t2()) > tol) {
            throw std::invalid_argument("signal file grid does not match the requested grid");
        }
        return loaded;
    }
    std::vector<cplx> q(grid.n() + 1);
    for (std::size_t k = 0; k <= grid.n(); ++k) q[k] = evaluate(spec, grid.node(k));
    return Signal(grid, std::move(q));
}

namespace {

std::vector<cplx> time_derivative(const Signal& s) {
    const auto q = s.samples();
    const std::size_t n = s.grid().n();
    const double h2 = 2.0 * s.grid().eps();
    std::vector<cplx> d(n + 1);
    d[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / h2;
    d[n] = (3.0 * q[n] - 4.0 * q[n - 1] + q[n - 2]) / h2;
    for (std::size_t k = 1; k < n; ++k) d[k] = (q[k + 1] - q[k - 1]) / h2;
    return d;
}

template <class F>
auto trapezoid(std::size_t n, double eps, F f) {
    auto sum = 0.5 * (f(0) + f(n));
    for (std::size_t k = 1; k < n; ++k) sum += f(k);
    return sum * eps;
}

}  // namespace

double conserved(const Signal& signal, int k, MomentumForm form) {
    const auto q = signal.samples();
    const std::size_t n = signal.grid().n();
    const double eps = signal.grid().eps();
    switch (k) {
        case 1: return trapezoid(n, eps, [&](std::size_t i) { return std::norm(q[i]); });
        case 2: {
            const auto d = time_derivative(signal);
            if (form == MomentumForm::literal) {
                const cplx v = trapezoid(n, eps, [&](std::size_t i) { return q[i] * d[i]; }) / (2.0 * kJ);
                return v.real();
            }
            const cplx v = trapezoid(n, eps, [&](std::size_t i) { return q[i] * std::conj(d[i]); }) / (2.0 * kJ);
            return v.real();
        }
        case 3: {
            const auto d = time_derivative(signal);
            const double v = trapezoid(n, eps, [&](std::size_t i) {
                const double m = std::norm(q[i]);
                return m * m - std::norm(d[i]);
            });
            return -0.25 * v;
        }
        default: throw std::invalid_argument("conserved quantity index must be 1, 2 or 3");
    }
}

double l1_norm(const Signal& signal) {
    const auto q = signal.samples();
    return trapezoid(signal.grid().n(), signal.grid().eps(), [&](std::size_t i) { return std::abs(q[i]); });
}

}  // namespace nft
