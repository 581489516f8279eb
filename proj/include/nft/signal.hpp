#ifndef NFT_SIGNAL_HPP
#define NFT_SIGNAL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nft/types.hpp"

namespace nft {

/// Uniform grid on [t1, t2] with n intervals and n + 1 nodes.
class TimeGrid {
public:
    TimeGrid(double t1, double t2, std::size_t n);

    double t1() const { return t1_; }
    double t2() const { return t2_; }
    std::size_t n() const { return n_; }
    double eps() const { return eps_; }
    double length() const { return t2_ - t1_; }

    /// t[k] = t1 + k*eps, with t[n] pinned to t2.
    double node(std::size_t k) const { return k == n_ ? t2_ : t1_ + static_cast<double>(k) * eps_; }

    std::vector<double> nodes() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t1_;
    double t2_;
    std::size_t n_;
    double eps_;
};

/// Validating factory; throws std::invalid_argument for n < 2 or t2 <= t1.
TimeGrid make_grid(double t1, double t2, long long n);

/// Complex envelope sampled at the n + 1 nodes of a grid. Immutable.
class Signal {
public:
    Signal(TimeGrid grid, std::vector<cplx> samples);

    const TimeGrid& grid() const { return grid_; }
    std::span<const cplx> samples() const { return q_; }
    cplx operator[](std::size_t k) const { return q_[k]; }
    std::size_t size() const { return q_.size(); }

private:
    TimeGrid grid_;
    std::vector<cplx> q_;
};

enum class PulseFamily { sech, rect, sinc, gaussian, raised_cosine, wavetrain, file };

std::string to_string(PulseFamily family);
PulseFamily parse_family(const std::string& name);

struct TrainComponent {
    cplx amplitude{1.0, 0.0};
    double delay = 0.0;  // time shift of the component
};

/// Waveform description. Every analytic family is base(scale * t) with
///   sech:          sech(x)
///   rect:          1 for |x| <= 1, else 0
///   sinc:          sin(pi x) / (pi x)
///   gaussian:      exp(-x^2)
///   raised_cosine: sinc(x) cos(pi beta x) / (1 - (2 beta x)^2)
/// multiplied by amplitude * e^{j phase} * e^{-j w1 t} * e^{j w2 t^2}.
/// A wavetrain superposes amplitude_i * base(scale * (t - delay_i)) for the
/// chosen base family before the common modulation is applied.
struct PulseSpec {
    PulseFamily family = PulseFamily::sech;
    cplx amplitude{1.0, 0.0};
    double scale = 1.0;
    double linear_chirp = 0.0;
    double quad_chirp = 0.0;
    double phase = 0.0;
    double rolloff = 0.5;
    PulseFamily train_base = PulseFamily::sinc;
    std::vector<TrainComponent> train;
    std::string path;
};

/// Throws std::invalid_argument if the pulse description violates its invariants.
void validate(const PulseSpec& spec);

/// Unit-amplitude base shape of an analytic family at x = scale * t.
double base_shape(PulseFamily family, double x, double rolloff);

/// Analytic value q(t) of a non-file spec.
cplx evaluate(const PulseSpec& spec, double t);

/// Smallest symmetric window around the pulse centre holding at least
/// `fraction` of the total energy.
std::pair<double, double> auto_window(const PulseSpec& spec, double fraction = 0.9999);

/// Samples the pulse on the grid. The file family loads a signal CSV whose
/// grid must match `grid`.
Signal generate(const PulseSpec& spec, const TimeGrid& grid);

enum class MomentumForm {
    standard,  // (1/2j) ∫ q conj(q_t) dt, real and consistent with the trace formula
    literal    // real part of (1/2j) ∫ q q_t dt
};

/// Time-domain conserved quantities E1 (energy), E2 (momentum), E3
/// (Hamiltonian); trapezoid rule with second-order finite differences.
double conserved(const Signal& signal, int k, MomentumForm form = MomentumForm::standard);

/// L1 norm ∫|q| dt by the trapezoid rule.
double l1_norm(const Signal& signal);

}  // namespace nft

#endif  // NFT_SIGNAL_HPP
