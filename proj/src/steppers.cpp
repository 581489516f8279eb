#include "nft/steppers.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace nft {

std::string to_string(Method m) {
    switch (m) {
        case Method::euler: return "euler";
        case Method::central: return "central";
        case Method::rk4: return "rk4";
        case Method::crank_nicolson: return "crank_nicolson";
        case Method::layer_peeling: return "layer_peeling";
        case Method::al1: return "al1";
        case Method::al2: return "al2";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string s(name);
    for (char& c : s) {
        if (c == '-') c = '_';
    }
    if (s == "euler" || s == "forward") return Method::euler;
    if (s == "central") return Method::central;
    if (s == "rk4") return Method::rk4;
    if (s == "crank_nicolson" || s == "cn") return Method::crank_nicolson;
    if (s == "layer_peeling" || s == "lp") return Method::layer_peeling;
    if (s == "al1" || s == "al") return Method::al1;
    if (s == "al2") return Method::al2;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

namespace {

const Mat2& lambda_derivative() {
    static const Mat2 m = (Mat2() << -kJ, 0.0, 0.0, kJ).finished();
    return m;
}

// cos(D eps), sin(D eps)/D and their derivatives with respect to λ, where
// D^2 = λ^2 + |q|^2. Both functions are entire in D^2, so no branch is needed.
struct SlabTrig {
    cplx c, s, dc, ds;
};

SlabTrig slab_trig(cplx q, cplx lambda, double eps) {
    const cplx d2 = lambda * lambda + std::norm(q);
    const cplx w = d2 * eps * eps;
    SlabTrig r{};
    cplx s_d2;  // d s / d(D^2)
    if (std::abs(w) < 0.1) {
        // Taylor series in w = (D eps)^2.
        r.c = 1.0 + w * (-1.0 / 2 + w * (1.0 / 24 + w * (-1.0 / 720 + w * (1.0 / 40320 + w * (-1.0 / 3628800 + w / 479001600.0)))));
        r.s = eps * (1.0 + w * (-1.0 / 6 + w * (1.0 / 120 + w * (-1.0 / 5040 + w * (1.0 / 362880 + w * (-1.0 / 39916800 + w / 6227020800.0))))));
        s_d2 = eps * eps * eps *
               (-1.0 / 6 + w * (2.0 / 120 + w * (-3.0 / 5040 + w * (4.0 / 362880 + w * (-5.0 / 39916800 + w * 6.0 / 6227020800.0)))));
    } else {
        const cplx d = std::sqrt(d2);
        r.c = std::cos(d * eps);
        r.s = std::sin(d * eps) / d;
        s_d2 = (eps * r.c - r.s) / (2.0 * d2);
    }
    r.dc = -eps * lambda * r.s;
    r.ds = 2.0 * lambda * s_d2;
    return r;
}

Mat2 scaled_identity(cplx v) { return Mat2::Identity() * v; }

StepMatrix euler_matrix(const StepSamples& s, cplx lambda, double eps, bool normalized) {
    StepMatrix m{Mat2::Identity() + eps * zs_matrix(s.q_k, lambda), eps * lambda_derivative()};
    if (normalized) {
        const cplx det = 1.0 + eps * eps * (lambda * lambda + std::norm(s.q_k));
        const cplx r = 1.0 / std::sqrt(det);
        const cplx dr = -eps * eps * lambda * r * r * r;
        m.da = m.da * r + m.a * dr;
        m.a *= r;
    }
    return m;
}

StepMatrix rk4_matrix(const StepSamples& s, cplx lambda, double eps) {
    const Mat2& dp = lambda_derivative();
    const Mat2 id = Mat2::Identity();
    const Mat2 p0 = zs_matrix(s.q_k, lambda);
    const Mat2 pm = zs_matrix(s.q_mid, lambda);
    const Mat2 p1 = zs_matrix(s.q_next, lambda);

    const Mat2 k1 = p0;
    const Mat2 k2 = pm * (id + 0.5 * eps * k1);
    const Mat2 k3 = pm * (id + 0.5 * eps * k2);
    const Mat2 k4 = p1 * (id + eps * k3);

    const Mat2 dk1 = dp;
    const Mat2 dk2 = dp * (id + 0.5 * eps * k1) + pm * (0.5 * eps * dk1);
    const Mat2 dk3 = dp * (id + 0.5 * eps * k2) + pm * (0.5 * eps * dk2);
    const Mat2 dk4 = dp * (id + eps * k3) + p1 * (eps * dk3);

    return {id + (eps / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), (eps / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4)};
}

StepMatrix crank_nicolson_matrix(const StepSamples& s, cplx lambda, double eps) {
    const Mat2 id = Mat2::Identity();
    const Mat2 lhs = id - 0.5 * eps * zs_matrix(s.q_next, lambda);
    const Mat2 rhs = id + 0.5 * eps * zs_matrix(s.q_k, lambda);
    const cplx det = lhs.determinant();
    if (!(std::abs(det) > 1e-14)) throw Error("singular Crank-Nicolson step matrix");
    const Mat2 inv = lhs.inverse();
    const Mat2 a = inv * rhs;
    // d/dλ [B^{-1} C] = B^{-1} (C' - B' A) with C' = (eps/2) M, B' = -(eps/2) M.
    return {a, 0.5 * eps * inv * lambda_derivative() * (id + a)};
}

// The slab carries the mean of its end samples; holding q_k alone would shift
// the signal by eps/2 and leave a first-order phase error in b.
StepMatrix layer_matrix(const StepSamples& s, cplx lambda, double eps) {
    const cplx q = 0.5 * (s.q_k + s.q_next);
    const SlabTrig t = slab_trig(q, lambda, eps);
    const Mat2 p = zs_matrix(q, lambda);
    return {scaled_identity(t.c) + t.s * p, scaled_identity(t.dc) + t.ds * p + t.s * lambda_derivative()};
}

StepMatrix al_matrix(const StepSamples& s, cplx lambda, double eps, bool normalized) {
    const cplx z = std::exp(-kJ * lambda * eps);
    const cplx q = s.q_k * eps;
    StepMatrix m;
    m.a << z, q, -std::conj(q), 1.0 / z;
    m.da << -kJ * eps * z, 0.0, 0.0, kJ * eps / z;
    if (normalized) {
        const double r = 1.0 / std::sqrt(1.0 + std::norm(q));
        m.a *= r;
        m.da *= r;
    }
    return m;
}

}  // namespace

Mat2 zs_matrix(cplx q, cplx lambda) {
    Mat2 p;
    p << -kJ * lambda, q, -std::conj(q), kJ * lambda;
    return p;
}

StepMatrix step_matrix(Method method, const StepSamples& s, cplx lambda, double eps, const StepOptions& opt) {
    switch (method) {
        case Method::euler: return euler_matrix(s, lambda, eps, opt.euler_normalized);
        case Method::central: return {2.0 * eps * zs_matrix(s.q_k, lambda), 2.0 * eps * lambda_derivative()};
        case Method::rk4: return rk4_matrix(s, lambda, eps);
        case Method::crank_nicolson: return crank_nicolson_matrix(s, lambda, eps);
        case Method::layer_peeling: return layer_matrix(s, lambda, eps);
        case Method::al1: return al_matrix(s, lambda, eps, false);
        case Method::al2: return al_matrix(s, lambda, eps, true);
    }
    throw std::invalid_argument("unknown method");
}

StepMatrix to_normalized(const StepMatrix& m, cplx lambda, double t_from, double t_to) {
    const double diff = t_to - t_from;
    const double sum = t_to + t_from;
    const cplx pd = std::exp(kJ * lambda * diff);
    const cplx ps = std::exp(kJ * lambda * sum);
    StepMatrix r;
    r.a << m.a(0, 0) * pd, m.a(0, 1) * ps, m.a(1, 0) / ps, m.a(1, 1) / pd;
    r.da << (m.da(0, 0) + kJ * diff * m.a(0, 0)) * pd, (m.da(0, 1) + kJ * sum * m.a(0, 1)) * ps,
        (m.da(1, 0) - kJ * sum * m.a(1, 0)) / ps, (m.da(1, 1) - kJ * diff * m.a(1, 1)) / pd;
    return r;
}

LayerFactors layer_factors(cplx q, cplx lambda, double eps, double t_k, double t_next, bool with_phase) {
    const SlabTrig t = slab_trig(q, lambda, eps);
    LayerFactors f{};
    f.x = t.c - kJ * lambda * t.s;
    f.xbar = t.c + kJ * lambda * t.s;
    f.y = -std::conj(q) * t.s;
    f.ybar = -q * t.s;
    f.dx = t.dc - kJ * t.s - kJ * lambda * t.ds;
    f.dxbar = t.dc + kJ * t.s + kJ * lambda * t.ds;
    f.dy = -std::conj(q) * t.ds;
    f.dybar = -q * t.ds;
    if (with_phase) {
        const double sum = t_k + t_next;
        const cplx p = std::exp(kJ * lambda * eps);
        const cplx sig = std::exp(-kJ * lambda * sum);
        f.dx = (f.dx + kJ * eps * f.x) * p;
        f.x *= p;
        f.dxbar = (f.dxbar - kJ * eps * f.xbar) / p;
        f.xbar /= p;
        f.dy = (f.dy - kJ * sum * f.y) * sig;
        f.y *= sig;
        f.dybar = (f.dybar + kJ * sum * f.ybar) / sig;
        f.ybar /= sig;
    }
    return f;
}

TransferState initial_state(Frame frame, cplx lambda, const TimeGrid& grid, bool with_derivative) {
    TransferState st;
    st.frame = frame;
    st.with_derivative = with_derivative;
    if (frame == Frame::jost) {
        const JostState j = jost_initial(lambda, grid.t1(), with_derivative);
        st.v = Vec2(j.v1, j.v2);
        if (with_derivative) st.dv = Vec2(*j.dv1, *j.dv2);
    } else {
        st.v = Vec2(1.0, 0.0);
        st.dv = Vec2::Zero();
    }
    return st;
}

namespace {

TransferState advance(Method method, const TransferState& st, const StepSamples& s, cplx lambda, const TimeGrid& grid,
                      const StepOptions& opt) {
    const std::size_t k = st.k;
    if (k >= grid.n()) throw std::out_of_range("step index past the end of the grid");
    const double eps = grid.eps();
    const double t0 = grid.node(k);
    const double t1 = grid.node(k + 1);
    const bool normalized = st.frame == Frame::normalized;

    TransferState out = st;
    out.k = k + 1;

    if (method == Method::central && k > 0) {
        StepMatrix inc = step_matrix(Method::central, s, lambda, eps);
        StepMatrix carry{Mat2::Identity(), Mat2::Zero()};
        if (normalized) {
            inc = to_normalized(inc, lambda, t0, t1);
            carry = to_normalized(carry, lambda, grid.node(k - 1), t1);
        }
        out.v = carry.a * st.v_prev + inc.a * st.v;
        if (st.with_derivative) {
            out.dv = carry.da * st.v_prev + carry.a * st.dv_prev + inc.da * st.v + inc.a * st.dv;
        }
        out.v_prev = st.v;
        out.dv_prev = st.dv;
        return out;
    }

    // The central scheme is bootstrapped by a single forward-Euler step.
    const Method one_step = method == Method::central ? Method::euler : method;
    StepOptions o = opt;
    if (method == Method::central) o.euler_normalized = false;
    StepMatrix m = step_matrix(one_step, s, lambda, eps, o);
    if (normalized) m = to_normalized(m, lambda, t0, t1);
    out.v = m.a * st.v;
    if (st.with_derivative) out.dv = m.da * st.v + m.a * st.dv;
    out.v_prev = st.v;
    out.dv_prev = st.dv;
    return out;
}

}  // namespace

TransferState step(Method method, const TransferState& state, const StepSamples& s, cplx lambda, const TimeGrid& grid,
                   const StepOptions& opt) {
    TransferState plain = state;
    plain.with_derivative = false;
    return advance(method, plain, s, lambda, grid, opt);
}

TransferState step_aug(Method method, const TransferState& state, const StepSamples& s, cplx lambda,
                       const TimeGrid& grid, const StepOptions& opt) {
    if (!state.with_derivative) throw std::invalid_argument("step_aug needs a state initialised with derivatives");
    return advance(method, state, s, lambda, grid, opt);
}

StepSamples step_samples(std::span<const cplx> q, std::size_t k) {
    const std::size_t n = q.size() - 1;
    StepSamples s{q[k], q[k + 1], cplx{}};
    if (n < 3) {
        s.q_mid = 0.5 * (q[k] + q[k + 1]);
    } else if (k == 0) {
        s.q_mid = (5.0 * q[0] + 15.0 * q[1] - 5.0 * q[2] + q[3]) / 16.0;
    } else if (k + 1 == n) {
        s.q_mid = (q[n - 3] - 5.0 * q[n - 2] + 15.0 * q[n - 1] + 5.0 * q[n]) / 16.0;
    } else {
        s.q_mid = (-q[k - 1] + 9.0 * q[k] + 9.0 * q[k + 1] - q[k + 2]) / 16.0;
    }
    return s;
}

Frame choose_frame(Method method, cplx lambda, const TimeGrid& grid, FramePolicy policy) {
    switch (policy) {
        case FramePolicy::jost: return Frame::jost;
        case FramePolicy::normalized: return Frame::normalized;
        case FramePolicy::automatic: break;
    }
    if (method == Method::layer_peeling) return Frame::normalized;
    return lambda.imag() * grid.length() > kNormalizeThreshold ? Frame::normalized : Frame::jost;
}

namespace {

ScatteringCoefficients telescoped_layer_peeling(const Signal& signal, cplx lambda, bool with_derivative) {
    const TimeGrid& grid = signal.grid();
    const auto q = signal.samples();
    Vec2 v(1.0, 0.0);
    Vec2 dv = Vec2::Zero();
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const StepMatrix m = layer_matrix(StepSamples{q[k], q[k + 1], q[k]}, lambda, grid.eps());
        if (with_derivative) dv = m.da * v + m.a * dv;
        v = m.a * v;
    }
    const double width = grid.t2() - grid.t1();
    const double centre = grid.t2() + grid.t1();
    const cplx ra = std::exp(kJ * lambda * width);
    const cplx rb = std::exp(-kJ * lambda * centre);
    ScatteringCoefficients c;
    c.lambda = lambda;
    c.a = v(0) * ra;
    c.b = v(1) * rb;
    if (with_derivative) {
        c.a_prime = (dv(0) + kJ * width * v(0)) * ra;
        c.b_prime = (dv(1) - kJ * centre * v(1)) * rb;
    }
    return c;
}

}  // namespace

ScatteringCoefficients propagate(Method method, const Signal& signal, cplx lambda, const PropagateOptions& opt) {
    if (method == Method::layer_peeling && opt.layer_phase == LayerPhase::telescoped) {
        return telescoped_layer_peeling(signal, lambda, opt.with_derivative);
    }
    const TimeGrid& grid = signal.grid();
    const auto q = signal.samples();
    const Frame frame = choose_frame(method, lambda, grid, opt.frame);

    TransferState st = initial_state(frame, lambda, grid, opt.with_derivative);
    for (std::size_t k = 0; k < grid.n(); ++k) {
        st = advance(method, st, step_samples(q, k), lambda, grid, opt.step);
    }

    if (frame == Frame::normalized) {
        ScatteringCoefficients c;
        c.lambda = lambda;
        c.a = st.v(0);
        c.b = st.v(1);
        if (opt.with_derivative) {
            c.a_prime = st.dv(0);
            c.b_prime = st.dv(1);
        }
        return c;
    }
    JostState j{st.v(0), st.v(1), std::nullopt, std::nullopt};
    if (opt.with_derivative) {
        j.dv1 = st.dv(0);
        j.dv2 = st.dv(1);
    }
    return coefficients_from_terminal(j, grid, lambda);
}

}  // namespace nft
