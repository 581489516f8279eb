#include "nft/discrete_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nft/parallel.hpp"

namespace nft {

void validate(const SearchRegion& r) {
    if (!(r.re_hi > r.re_lo)) throw std::invalid_argument("search region needs re_hi > re_lo");
    if (!(r.im_lo > 0.0)) throw std::invalid_argument("search region needs im_lo > 0");
    if (!(r.im_hi > r.im_lo)) throw std::invalid_argument("search region needs im_hi > im_lo");
}

SearchRegion default_region(const Signal& signal) {
    const TimeGrid& g = signal.grid();
    const auto q = signal.samples();
    const std::size_t n = g.n();
    const double eps = g.eps();
    const double e1 = conserved(signal, 1);

    // ∫|q_t|² dt with centered differences; its ratio to E1 is the mean
    // squared angular frequency, and λ = -ω/2.
    double slope_energy = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        cplx d;
        if (k == 0) {
            d = (q[1] - q[0]) / eps;
        } else if (k == n) {
            d = (q[n] - q[n - 1]) / eps;
        } else {
            d = (q[k + 1] - q[k - 1]) / (2.0 * eps);
        }
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        slope_energy += w * eps * std::norm(d);
    }
    double bandwidth = e1 > 0.0 ? 0.5 * std::sqrt(slope_energy / e1) : 0.0;
    const double nyquist = kPi / (2.0 * eps);
    bandwidth = std::min(bandwidth, nyquist);
    const double half = std::max(10.0, 2.0 * bandwidth);
    return SearchRegion{-half, half, 0.01, 1.2 * e1 / 4.0 + 1.0};
}

std::string to_string(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::converged: return "converged";
        case NewtonStatus::max_iter: return "max_iter";
        case NewtonStatus::degenerate: return "degenerate";
        case NewtonStatus::left_region: return "left_region";
        case NewtonStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx random_point(const SearchRegion& r, std::mt19937_64& rng) {
    const double x = r.re_lo + (r.re_hi - r.re_lo) * uniform01(rng);
    const double y = r.im_lo + (r.im_hi - r.im_lo) * uniform01(rng);
    return {x, y};
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

NewtonResult newton_refine(const Signal& signal, Method method, cplx lambda0, const NewtonOptions& opts) {
    const SearchRegion region = opts.region.value_or(default_region(signal));
    validate(region);
    if (!(opts.delta > 0.0)) throw std::invalid_argument("Newton tolerance must be positive");
    if (!region.contains(lambda0)) throw std::invalid_argument("Newton starting point lies outside the search region");

    PropagateOptions po = opts.propagate;
    po.with_derivative = true;
    std::mt19937_64 rng = seeded(opts.rng_seed, 0);

    NewtonResult res;
    cplx lambda = lambda0;
    res.iterates.push_back(lambda);
    double prev_step = std::numeric_limits<double>::infinity();
    int chain_iter = 0;

    while (res.iterations < opts.max_iter * (opts.max_restarts + 1)) {
        if (chain_iter >= opts.max_iter) break;
        const ScatteringCoefficients c = propagate(method, signal, lambda, po);
        ++res.iterations;
        ++chain_iter;
        res.last = lambda;
        if (!c.finite()) {
            res.status = NewtonStatus::non_finite;
            return res;
        }
        const cplx ap = *c.a_prime;
        res.a_prime = ap;
        cplx step = c.a / ap;
        if (!opts.deflate.empty()) {
            // 1 / (a'/a - Σ 1/(λ - λ_i)) is the Newton step of the deflated function.
            cplx pole_sum = 0.0;
            for (const cplx z : opts.deflate) pole_sum += 1.0 / (lambda - z);
            step = 1.0 / (ap / c.a - pole_sum);
        }
        step *= opts.alpha;
        if (ap == 0.0 || !finite(step)) {
            res.status = NewtonStatus::degenerate;
            return res;
        }
        const cplx next = lambda - step;
        if (!region.contains(next)) {
            if (res.restarts >= opts.max_restarts) {
                res.last = next;
                res.status = NewtonStatus::left_region;
                return res;
            }
            ++res.restarts;
            lambda = random_point(region, rng);
            res.iterates.assign(1, lambda);
            prev_step = std::numeric_limits<double>::infinity();
            chain_iter = 0;
            continue;
        }
        lambda = next;
        res.iterates.push_back(lambda);
        const double ds = std::abs(step);
        const bool floor_reached = ds < 1e-10 * std::max(1.0, std::abs(lambda)) && ds >= prev_step;
        if (ds < opts.delta || floor_reached) {
            const ScatteringCoefficients f = propagate(method, signal, lambda, po);
            res.last = lambda;
            res.a_prime = f.a_prime.value_or(cplx{});
            res.eigenvalue.lambda = lambda;
            res.eigenvalue.residual = std::abs(f.a);
            try {
                res.eigenvalue.qtilde = discrete_amplitude(f);
            } catch (const DegenerateError&) {
                res.status = NewtonStatus::degenerate;
                return res;
            }
            res.status = NewtonStatus::converged;
            return res;
        }
        prev_step = ds;
    }
    res.status = NewtonStatus::max_iter;
    return res;
}

TraceReport trace_residual(const std::array<double, 3>& e_time, const std::array<double, 3>& e_cont,
                           std::span<const DiscreteEigenvalue> eigs) {
    TraceReport r;
    r.e_time = e_time;
    r.e_cont = e_cont;
    for (int k = 1; k <= 3; ++k) {
        double s = 0.0;
        for (const auto& e : eigs) s += std::pow(e.lambda, k).imag();
        r.e_disc[k - 1] = 4.0 / k * s;
        r.residual[k - 1] = std::abs(e_time[k - 1] - e_cont[k - 1] - r.e_disc[k - 1]);
    }
    return r;
}

std::vector<cplx> mesh_seeds(const ContinuousSpectrum& spectrum, const SearchRegion& region, std::size_t limit) {
    const auto& pts = spectrum.points;
    struct Dip {
        double height;  // estimated distance of the zero from the real axis
        double re;
    };
    std::vector<Dip> dips;
    const double h = spectrum.mesh.step();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (pts[i - 1].pole || pts[i].pole || pts[i + 1].pole) continue;
        const double m = std::abs(pts[i].a);
        if (!(m < 0.9) || m > std::abs(pts[i - 1].a) || m > std::abs(pts[i + 1].a)) continue;
        const double re = pts[i].lambda;
        if (re < region.re_lo || re > region.re_hi) continue;
        // |a'| from the curvature-free estimate |a(λ+h) - a(λ-h)| / 2h.
        const double slope = std::abs(pts[i + 1].a - pts[i - 1].a) / (2.0 * h);
        const double height = slope > 0.0 ? m / slope : region.im_hi;
        dips.push_back({height, re});
    }
    std::stable_sort(dips.begin(), dips.end(), [](const Dip& x, const Dip& y) { return x.height < y.height; });
    std::vector<cplx> out;
    for (const Dip& d : dips) {
        for (const double f : {1.0, 0.3, 3.0}) {
            if (out.size() >= limit) return out;
            out.emplace_back(d.re, std::clamp(f * d.height, 2.0 * region.im_lo, region.im_hi));
        }
    }
    return out;
}

std::vector<DiscreteEigenvalue> SearchResult::physical() const {
    std::vector<DiscreteEigenvalue> out;
    for (const auto& e : eigenvalues) {
        if (e.lambda.imag() > physical_threshold) out.push_back(e);
    }
    return out;
}

SearchResult find_eigenvalues(const Signal& signal, Method method, const NewtonOptions& opts, const LambdaMesh& mesh,
                              const SearchOptions& search) {
    SearchResult out;
    out.region = opts.region.value_or(default_region(signal));
    validate(out.region);
    if (search.batch < 1) throw std::invalid_argument("search batch must be at least 1");

    PropagateOptions cont_opt = opts.propagate;
    cont_opt.with_derivative = false;
    out.continuous = continuous_spectrum(signal, method, mesh, cont_opt);

    std::array<double, 3> e_time{};
    std::array<double, 3> e_cont{};
    for (int k = 1; k <= 3; ++k) {
        e_time[k - 1] = conserved(signal, k);
        out.energy[k - 1] = spectral_energy(out.continuous, k);
        e_cont[k - 1] = out.energy[k - 1].value;
    }
    const double threshold = search.stop_relative * e_time[0];
    out.physical_threshold = 0.02 * std::max(1.0, e_time[0] / 4.0);
    auto closed = [&] { return out.trace.residual[0] < threshold || out.trace.residual[0] == 0.0; };

    const std::vector<cplx> seeds =
        mesh_seeds(out.continuous, out.region, static_cast<std::size_t>(std::max(0, search.mesh_seeds)));

    std::vector<double> a_prime_abs;
    out.trace = trace_residual(e_time, e_cont, out.eigenvalues);
    while (!closed() && out.draws < search.draw_budget) {
        const int count = std::min(search.batch, search.draw_budget - out.draws);
        std::vector<std::optional<NewtonResult>> results(static_cast<std::size_t>(count));
        parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
            const auto draw = static_cast<std::uint64_t>(out.draws) + i;
            std::mt19937_64 rng = seeded(opts.rng_seed, draw + 1);
            NewtonOptions o = opts;
            o.region = out.region;
            o.max_restarts = 0;
            o.rng_seed = rng();
            for (const auto& e : out.eigenvalues) o.deflate.push_back(e.lambda);
            const cplx start = draw < seeds.size() ? seeds[draw] : random_point(out.region, rng);
            try {
                results[i] = newton_refine(signal, method, start, o);
            } catch (const Error&) {
                results[i].reset();
            }
        });
        for (const auto& r : results) {
            if (!r || !r->converged()) continue;
            const DiscreteEigenvalue& e = r->eigenvalue;
            bool duplicate = false;
            for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
                if (std::abs(out.eigenvalues[j].lambda - e.lambda) < search.dedup_tol) {
                    duplicate = true;
                    if (a_prime_abs[j] < 1e-3) out.eigenvalues[j].multiplicity_hint = 2;
                }
            }
            if (!duplicate) {
                out.eigenvalues.push_back(e);
                a_prime_abs.push_back(std::abs(r->a_prime));
            }
        }
        out.draws += count;
        out.trace = trace_residual(e_time, e_cont, out.eigenvalues);
    }
    out.complete = closed();
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& x, const auto& y) {
        if (x.lambda.imag() != y.lambda.imag()) return x.lambda.imag() > y.lambda.imag();
        return x.lambda.real() < y.lambda.real();
    });
    return out;
}

}  // namespace nft
