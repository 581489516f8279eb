#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nft/continuous.hpp"
#include "nft/csv_io.hpp"
#include "nft/discrete_matrix.hpp"
#include "nft/discrete_search.hpp"
#include "nft/nls_prop.hpp"
#include "nft/oracles.hpp"
#include "nft/signal.hpp"
#include "nft/steppers.hpp"
#include "pulse_args.hpp"

namespace nft::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonArgs {
    std::uint64_t seed = 1;
    bool deterministic = false;
    std::string report;
};

struct SearchArgs {
    std::string method = "layer-peeling";
    double lmin = -20.0;
    double lmax = 20.0;
    long long mesh = 2001;
    double alpha = 1.0;
    double delta = 1e-12;
    int max_iter = 100;
    int budget = 200;
    double stop = 1e-2;
    int mesh_seeds = 48;

    Json to_json() const {
        return Json{{"method", method},   {"lmin", lmin},         {"lmax", lmax},     {"mesh", mesh},
                    {"alpha", alpha},     {"delta", delta},       {"max_iter", max_iter},
                    {"draw_budget", budget}, {"stop_relative", stop}, {"mesh_seeds", mesh_seeds}};
    }
};

void add_common(CLI::App& app, CommonArgs& c) {
    app.add_option("--seed", c.seed, "Random seed");
    app.add_flag("--deterministic", c.deterministic, "Report timing_ms as 0 so reruns are byte-identical");
    app.add_option("--report", c.report, "JSON run-report path");
}

void add_search(CLI::App& app, SearchArgs& s) {
    app.add_option("--method", s.method, "Transfer method: euler, central, rk4, crank-nicolson, layer-peeling, al1, al2");
    app.add_option("--lmin", s.lmin, "Lower end of the real λ mesh");
    app.add_option("--lmax", s.lmax, "Upper end of the real λ mesh");
    app.add_option("--mesh", s.mesh, "Number of mesh points");
    app.add_option("--alpha", s.alpha, "Newton step modifier");
    app.add_option("--delta", s.delta, "Newton stopping tolerance on |Δλ|");
    app.add_option("--max-iter", s.max_iter, "Newton iteration cap");
    app.add_option("--budget", s.budget, "Random-restart draw budget");
    app.add_option("--stop", s.stop, "Stop when the energy residual falls below this fraction of E1");
    app.add_option("--mesh-seeds", s.mesh_seeds, "Starting points taken from dips of |a| on the mesh (0 disables)");
}

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json array3(const std::array<double, 3>& a) { return Json::array({a[0], a[1], a[2]}); }

Json eigen_json(const DiscreteEigenvalue& e, double threshold) {
    Json j = complex_json(e.lambda);
    j["qtilde"] = complex_json(e.qtilde);
    j["residual"] = e.residual;
    j["multiplicity_hint"] = e.multiplicity_hint;
    j["physical"] = e.lambda.imag() > threshold;
    return j;
}

Json trace_json(const TraceReport& t) {
    Json j;
    j["e_time"] = array3(t.e_time);
    j["e_cont"] = array3(t.e_cont);
    j["e_disc"] = array3(t.e_disc);
    j["trace"] = array3(t.residual);
    j["relative_trace"] = t.e_time[0] > 0.0 ? t.residual[0] / t.e_time[0] : t.residual[0];
    return j;
}

Json search_residuals(const SearchResult& r) {
    Json j = trace_json(r.trace);
    j["complete"] = r.complete;
    j["draws"] = r.draws;
    j["physical_threshold"] = r.physical_threshold;
    j["tail_ok"] = r.energy[0].tail_ok;
    j["poles"] = r.continuous.poles().size();
    return j;
}

Json region_json(const SearchRegion& r) {
    return Json{{"re_lo", r.re_lo}, {"re_hi", r.re_hi}, {"im_lo", r.im_lo}, {"im_hi", r.im_hi}};
}

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

/// Writes `body` to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(out);
        return;
    }
    auto f = open_out(path);
    body(f);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string report_path(const CommonArgs& c, const std::string& csv_path) {
    if (!c.report.empty()) return c.report;
    if (csv_path.empty() || csv_path == "-") return {};
    return csv_path + ".json";
}

class Clock {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json make_report(const std::string& command, Json config, Json residuals, Json eigenvalues, const CommonArgs& c,
                 const Clock& clock) {
    Json j;
    j["command"] = command;
    j["config"] = std::move(config);
    j["residuals"] = std::move(residuals);
    j["eigenvalues"] = std::move(eigenvalues);
    j["timing_ms"] = c.deterministic ? 0.0 : clock.ms();
    j["seed"] = c.seed;
    return j;
}

void write_report(const std::string& path, const Json& report) {
    if (path.empty()) return;
    auto f = open_out(path);
    f << report.dump(2) << '\n';
}

SearchResult run_search(const Signal& signal, const SearchArgs& s, std::uint64_t seed) {
    NewtonOptions opts;
    opts.alpha = s.alpha;
    opts.delta = s.delta;
    opts.max_iter = s.max_iter;
    opts.rng_seed = seed;
    SearchOptions so;
    so.stop_relative = s.stop;
    so.draw_budget = s.budget;
    so.mesh_seeds = s.mesh_seeds;
    if (s.budget < 1) throw std::invalid_argument("--budget must be positive");
    if (!(s.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
    return find_eigenvalues(signal, parse_method(s.method), opts, make_mesh(s.lmin, s.lmax, s.mesh), so);
}

std::vector<double> linspace(double from, double to, long long steps) {
    if (steps < 2) throw std::invalid_argument("--steps must be at least 2");
    if (!(from != to)) throw std::invalid_argument("--from and --to must differ");
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (long long i = 0; i < steps; ++i) {
        v[static_cast<std::size_t>(i)] =
            i + 1 == steps ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return v;
}

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> out;
    for (const auto& f : split_csv_line(text)) {
        if (f.empty()) continue;
        const double v = parse_double(f);
        if (v != std::floor(v) || v < 2) throw std::invalid_argument("bad sample count '" + f + "'");
        out.push_back(static_cast<long long>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty --n list");
    return out;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    PulseArgs pulse;
    CommonArgs common;
    std::string out;
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
    const Clock clock;
    const Signal sig = g.pulse.signal();
    emit(g.out, out, [&](std::ostream& o) { write_signal_csv(o, sig); });
    Json res{{"e1", conserved(sig, 1)}, {"l1", l1_norm(sig)}, {"t1", sig.grid().t1()}, {"t2", sig.grid().t2()}};
    write_report(report_path(g.common, g.out), make_report("gen", g.pulse.to_json(), res, Json::array(), g.common, clock));
    return kExitOk;
}

// ---------------------------------------------------------------- nft

struct NftArgs {
    PulseArgs pulse;
    CommonArgs common;
    SearchArgs search;
    bool discrete = false;
    std::string out;
};

int cmd_nft(const NftArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    const Signal sig = a.pulse.signal();
    Json config = a.pulse.to_json();
    config["search"] = a.search.to_json();
    config["discrete"] = a.discrete;

    ContinuousSpectrum spectrum;
    std::optional<SearchResult> result;
    Json residuals;
    Json eigs = Json::array();
    if (a.discrete) {
        result = run_search(sig, a.search, a.common.seed);
        spectrum = result->continuous;
        residuals = search_residuals(*result);
        residuals["region"] = region_json(result->region);
        for (const auto& e : result->eigenvalues) eigs.push_back(eigen_json(e, result->physical_threshold));
    } else {
        spectrum = continuous_spectrum(sig, parse_method(a.search.method), make_mesh(a.search.lmin, a.search.lmax, a.search.mesh));
        residuals["poles"] = spectrum.poles().size();
    }

    if (a.out.empty() || a.out == "-") {
        write_spectrum_csv(out, spectrum);
    } else {
        fs::create_directories(a.out);
        const fs::path dir(a.out);
        emit((dir / "spectrum.csv").string(), out, [&](std::ostream& o) { write_spectrum_csv(o, spectrum); });
        if (result) {
            const auto phys = result->physical();
            emit((dir / "discrete.csv").string(), out, [&](std::ostream& o) { write_discrete_csv(o, phys); });
        }
    }
    std::string rpath = a.common.report;
    if (rpath.empty() && !a.out.empty() && a.out != "-") rpath = (fs::path(a.out) / "report.json").string();
    write_report(rpath, make_report("nft", config, residuals, eigs, a.common, clock));

    if (result && !result->complete) {
        err << "nft: trace formula not closed after " << result->draws << " draws (relative residual "
            << result->trace.residual[0] / std::max(result->trace.e_time[0], 1e-300) << ")\n";
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- eig

struct EigArgs {
    PulseArgs pulse;
    CommonArgs common;
    std::string matrix = "spectral";
    int modes = 0;
    std::optional<double> threshold;
    bool refine = false;
    std::string refine_method = "layer-peeling";
    std::string dump;
    std::string out;
};

int cmd_eig(const EigArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    const Signal sig = a.pulse.signal();
    const MatrixMethod mm = parse_matrix_method(a.matrix);
    const int modes = a.modes > 0 ? a.modes : default_spectral_modes(sig);
    FilterPolicy policy = default_policy(sig, mm);
    if (a.threshold) policy.im_threshold = *a.threshold;

    const ComplexMatrix m = build_matrix(sig, mm, modes);
    if (!a.dump.empty()) emit(a.dump, out, [&](std::ostream& o) { dump_matrix(o, m); });
    const auto candidates = filter_physical(all_eigenvalues(m), policy);

    // Scattering data at each candidate (after optional Newton refinement).
    const Method method = parse_method(a.refine_method);
    std::vector<DiscreteEigenvalue> eigs;
    Json eig_json = Json::array();
    int refine_failures = 0;
    for (const auto& c : candidates) {
        cplx lambda = c.lambda;
        std::string status = "unrefined";
        if (a.refine) {
            NewtonOptions opts;
            opts.max_restarts = 0;
            SearchRegion region = default_region(sig);
            region.re_lo = std::min(region.re_lo, lambda.real() - 1.0);
            region.re_hi = std::max(region.re_hi, lambda.real() + 1.0);
            region.im_lo = std::min(region.im_lo, 0.5 * lambda.imag());
            region.im_hi = std::max(region.im_hi, lambda.imag() + 1.0);
            opts.region = region;
            const auto r = newton_refine(sig, method, lambda, opts);
            status = to_string(r.status);
            if (r.converged()) {
                lambda = r.eigenvalue.lambda;
            } else {
                ++refine_failures;
            }
        }
        PropagateOptions po;
        po.with_derivative = true;
        const auto sc = propagate(method, sig, lambda, po);
        DiscreteEigenvalue e;
        e.lambda = lambda;
        e.residual = std::abs(sc.a);
        e.qtilde = sc.a_prime && std::abs(*sc.a_prime) > 0.0 ? sc.b / *sc.a_prime : cplx{0.0, 0.0};
        eigs.push_back(e);
        Json j = eigen_json(e, policy.im_threshold);
        j["matrix_lambda"] = complex_json(c.lambda);
        j["wrap_risk"] = c.wrap_risk;
        j["merged"] = c.merged;
        j["refine"] = status;
        eig_json.push_back(j);
    }

    std::string csv = a.out;
    std::string rpath = a.common.report;
    if (!a.out.empty() && a.out != "-" && (fs::is_directory(a.out) || a.out.back() == '/')) {
        csv = (fs::path(a.out) / "discrete.csv").string();
        if (rpath.empty()) rpath = (fs::path(a.out) / "report.json").string();
    } else if (rpath.empty()) {
        rpath = report_path(a.common, a.out);
    }
    emit(csv, out, [&](std::ostream& o) { write_discrete_csv(o, eigs); });

    Json config = a.pulse.to_json();
    config["matrix"] = to_string(mm);
    config["order"] = m.rows();
    if (mm == MatrixMethod::spectral) config["modes"] = modes;
    config["im_threshold"] = policy.im_threshold;
    config["merge_tol"] = policy.merge_tol;
    if (policy.strip) config["strip"] = Json::array({policy.strip->first, policy.strip->second});
    config["refine"] = a.refine;
    config["refine_method"] = to_string(method);
    Json residuals{{"count", eigs.size()}, {"refine_failures", refine_failures}};
    write_report(rpath, make_report("eig", config, residuals, eig_json, a.common, clock));
    if (refine_failures > 0) {
        err << "eig: " << refine_failures << " candidate(s) did not converge under Newton refinement\n";
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    PulseArgs pulse;
    CommonArgs common;
    SearchArgs search;
    std::string param;
    double from = 0.0;
    double to = 1.0;
    long long steps = 11;
    std::string matrix;
    std::string out;
};

PulseSpec with_param(PulseSpec s, const std::string& param, double v) {
    if (param == "amp") {
        s.amplitude = v;
    } else if (param == "phase") {
        s.phase = v;
    } else if (param == "linear_chirp") {
        s.linear_chirp = v;
    } else if (param == "quad_chirp") {
        s.quad_chirp = v;
    } else if (param == "dilation") {
        s.scale = v;
    } else if (param == "delay") {
        // Components spread symmetrically, neighbours `v` apart.
        if (s.family != PulseFamily::wavetrain) throw std::invalid_argument("--param delay needs --pulse wavetrain");
        const double mid = 0.5 * static_cast<double>(s.train.size() - 1);
        for (std::size_t i = 0; i < s.train.size(); ++i) s.train[i].delay = (static_cast<double>(i) - mid) * v;
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + param + "'");
    }
    return s;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    if (!a.pulse.in.empty()) throw std::invalid_argument("sweep needs an analytic pulse, not --in");
    const PulseSpec base = a.pulse.spec();
    const auto values = linspace(a.from, a.to, a.steps);
    std::optional<MatrixMethod> mm;
    if (!a.matrix.empty()) mm = parse_matrix_method(a.matrix);
    with_param(base, a.param, values.front());  // validates the parameter name early

    struct Row {
        double param;
        cplx lambda;
        bool complete;
    };
    std::vector<Row> rows;
    Json per_value = Json::array();
    int incomplete = 0;
    for (double v : values) {
        const PulseSpec spec = with_param(base, a.param, v);
        validate(spec);
        // The window follows the pulse, except that a zero amplitude keeps the unit-amplitude window.
        PulseSpec shape = spec;
        if (std::abs(shape.amplitude) == 0.0) shape.amplitude = 1.0;
        const auto [t1, t2] = a.pulse.bounds(shape);
        const Signal sig = generate(spec, make_grid(t1, t2, a.pulse.n));
        std::vector<cplx> found;
        bool complete = true;
        double rel = 0.0;
        if (mm) {
            for (const auto& c : matrix_eigenvalues(sig, *mm)) found.push_back(c.lambda);
        } else {
            const auto r = run_search(sig, a.search, a.common.seed);
            for (const auto& e : r.physical()) found.push_back(e.lambda);
            complete = r.complete;
            rel = r.trace.e_time[0] > 0.0 ? r.trace.residual[0] / r.trace.e_time[0] : 0.0;
        }
        std::sort(found.begin(), found.end(), [](cplx x, cplx y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });
        if (found.empty()) {
            rows.push_back({v, {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()}, complete});
        }
        for (cplx z : found) rows.push_back({v, z, complete});
        if (!complete) ++incomplete;
        Json pv{{"param", v}, {"count", found.size()}, {"complete", complete}, {"relative_trace", rel},
                {"t1", t1}, {"t2", t2}};
        per_value.push_back(pv);
    }

    emit(a.out, out, [&](std::ostream& o) {
        o << "param,re_lambda,im_lambda,complete\n";
        for (const auto& r : rows) {
            o << format_number(r.param) << ',' << format_number(r.lambda.real()) << ','
              << format_number(r.lambda.imag()) << ',' << (r.complete ? 1 : 0) << '\n';
        }
    });

    Json config = a.pulse.to_json();
    config["param"] = a.param;
    config["from"] = a.from;
    config["to"] = a.to;
    config["steps"] = a.steps;
    if (mm) {
        config["matrix"] = to_string(*mm);
    } else {
        config["search"] = a.search.to_json();
    }
    Json eigs = Json::array();
    for (const auto& r : rows) {
        if (std::isnan(r.lambda.real())) continue;
        Json j = complex_json(r.lambda);
        j["param"] = r.param;
        eigs.push_back(j);
    }
    Json residuals{{"values", per_value}, {"incomplete", incomplete}};
    write_report(report_path(a.common, a.out), make_report("sweep", config, residuals, eigs, a.common, clock));
    if (incomplete > 0) {
        err << "sweep: trace formula not closed at " << incomplete << " parameter value(s); rows flagged\n";
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- propagate

struct PropagateArgs {
    PulseArgs pulse;
    CommonArgs common;
    double z = 0.0;
    long long steps = 1000;
    double padding = 2.0;
    bool keep_padding = false;
    std::optional<double> t0_ps;
    std::string out;
};

int cmd_propagate(const PropagateArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    const Signal sig = a.pulse.signal();
    if (a.steps < 1) throw std::invalid_argument("--steps must be at least 1");
    PropagationPlan plan;
    plan.distance = a.z;
    plan.steps = static_cast<std::size_t>(a.steps);
    plan.padding = a.padding;
    plan.keep_padding = a.keep_padding;
    const auto r = ssf_propagate(sig, plan);
    emit(a.out, out, [&](std::ostream& o) { write_signal_csv(o, r.signal); });

    Json config = a.pulse.to_json();
    config["z"] = a.z;
    config["steps"] = a.steps;
    config["padding"] = a.padding;
    config["keep_padding"] = a.keep_padding;
    if (a.t0_ps) {
        const FiberScales f = fiber_scales(*a.t0_ps);
        config["fiber"] = Json{{"t0_ps", f.t0_ps},
                               {"beta2_ps2_per_km", f.beta2_ps2_per_km},
                               {"z_unit_km", f.z_unit_km},
                               {"power_unit_w", f.power_unit_w},
                               {"distance_km", a.z * f.z_unit_km}};
    }
    Json residuals{{"leakage", r.leakage},
                   {"leakage_warning", r.leakage_warning},
                   {"e1_before", conserved(sig, 1)},
                   {"e1_after", conserved(r.signal, 1)}};
    write_report(report_path(a.common, a.out), make_report("propagate", config, residuals, Json::array(), a.common, clock));
    if (r.leakage_warning) err << "propagate: energy leakage " << r.leakage << " exceeds 1e-6; widen --padding\n";
    return kExitOk;
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
    PulseArgs pulse;
    CommonArgs common;
    SearchArgs search;
    std::string eigs;
    double tol = 1e-2;
    std::string out;
};

int cmd_trace(const TraceArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    const Signal sig = a.pulse.signal();
    Json config = a.pulse.to_json();
    config["search"] = a.search.to_json();
    config["tol"] = a.tol;
    TraceReport t;
    Json residuals;
    Json eig_json = Json::array();
    if (!a.eigs.empty()) {
        std::ifstream f(a.eigs);
        if (!f) throw std::runtime_error("cannot read '" + a.eigs + "'");
        const auto eigs = read_discrete_csv(f);
        const auto spectrum = continuous_spectrum(sig, parse_method(a.search.method), make_mesh(a.search.lmin, a.search.lmax, a.search.mesh));
        std::array<double, 3> e_time{}, e_cont{};
        for (int k = 1; k <= 3; ++k) {
            e_time[k - 1] = conserved(sig, k);
            e_cont[k - 1] = spectral_energy(spectrum, k).value;
        }
        t = trace_residual(e_time, e_cont, eigs);
        residuals = trace_json(t);
        config["eigs"] = a.eigs;
        for (const auto& e : eigs) eig_json.push_back(eigen_json(e, 0.0));
    } else {
        const auto r = run_search(sig, a.search, a.common.seed);
        t = r.trace;
        residuals = search_residuals(r);
        for (const auto& e : r.eigenvalues) eig_json.push_back(eigen_json(e, r.physical_threshold));
    }
    const Json report = make_report("trace", config, residuals, eig_json, a.common, clock);
    emit(a.out, out, [&](std::ostream& o) { o << report.dump(2) << '\n'; });
    if (!a.common.report.empty()) write_report(a.common.report, report);
    const double rel = t.e_time[0] > 0.0 ? t.residual[0] / t.e_time[0] : t.residual[0];
    if (!(rel < a.tol)) {
        err << "trace: relative residual " << rel << " is not below " << a.tol << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    PulseArgs pulse;
    CommonArgs common;
    std::string methods = "all";
    std::string ns = "64,128,256,512,1024,2048";
    std::string target_eig;
    std::optional<double> lambda;
    std::string out;
};

struct BenchMethod {
    std::string name;
    std::optional<Method> stepper;
    std::optional<MatrixMethod> matrix;
};

std::vector<BenchMethod> parse_bench_methods(const std::string& text) {
    std::vector<BenchMethod> out;
    for (const auto& f : split_csv_line(text)) {
        if (f.empty()) continue;
        if (f == "all") {
            for (Method m : kAllMethods) out.push_back({to_string(m), m, std::nullopt});
        } else if (f == "matrices") {
            for (MatrixMethod m : {MatrixMethod::central_difference, MatrixMethod::al, MatrixMethod::al_simplified,
                                   MatrixMethod::al_normalized, MatrixMethod::spectral}) {
                out.push_back({"matrix:" + to_string(m), std::nullopt, m});
            }
        } else if (f.rfind("matrix:", 0) == 0) {
            const MatrixMethod m = parse_matrix_method(f.substr(7));
            out.push_back({"matrix:" + to_string(m), std::nullopt, m});
        } else {
            const Method m = parse_method(f);
            out.push_back({to_string(m), m, std::nullopt});
        }
    }
    if (out.empty()) throw std::invalid_argument("empty --methods list");
    return out;
}

/// a(λ) of the analytic pulse: closed form for an unchirped unit-width sech,
/// otherwise an adaptive ODE reference.
cplx reference_a(const PulseSpec& spec, double t1, double t2, double lambda) {
    const bool plain_sech = spec.family == PulseFamily::sech && spec.scale == 1.0 && spec.linear_chirp == 0.0 &&
                            spec.quad_chirp == 0.0 && spec.amplitude.imag() == 0.0 && spec.phase == 0.0;
    if (plain_sech && t2 - t1 >= 60.0) return sy_a(spec.amplitude.real(), lambda);
    return ode_continuous_reference([&](double t) { return evaluate(spec, t); }, t1, t2, lambda, 1e-12).a;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const Clock clock;
    if (!a.pulse.in.empty()) throw std::invalid_argument("bench needs an analytic pulse, not --in");
    if (a.target_eig.empty() == !a.lambda) throw std::invalid_argument("give exactly one of --target-eig and --lambda");
    const PulseSpec spec = a.pulse.spec();
    const auto methods = parse_bench_methods(a.methods);
    const auto ns = parse_int_list(a.ns);
    const auto [t1, t2] = a.pulse.bounds(spec);

    std::optional<cplx> target;
    cplx a_ref{0.0, 0.0};
    if (!a.target_eig.empty()) {
        target = parse_complex(a.target_eig);
        if (!(target->imag() > 0.0)) throw std::invalid_argument("--target-eig must lie in the upper half plane");
    } else {
        a_ref = reference_a(spec, t1, t2, *a.lambda);
        for (const auto& m : methods) {
            if (m.matrix) throw std::invalid_argument("matrix methods need --target-eig");
        }
    }

    struct Row {
        std::string method;
        long long n;
        double error;
    };
    std::vector<Row> rows;
    int failures = 0;
    for (const auto& m : methods) {
        for (long long n : ns) {
            const Signal sig = generate(spec, make_grid(t1, t2, n));
            double error = std::numeric_limits<double>::quiet_NaN();
            if (m.matrix) {
                const int modes = std::max(2, static_cast<int>(std::min<long long>(n, 256)) / 2 * 2);
                const auto cands = matrix_eigenvalues(sig, *m.matrix, std::nullopt, modes);
                for (const auto& c : cands) {
                    const double d = std::abs(c.lambda - *target);
                    if (!(d >= error)) error = d;
                }
            } else if (target) {
                NewtonOptions opts;
                opts.max_restarts = 0;
                opts.region = SearchRegion{target->real() - 5.0, target->real() + 5.0, 1e-3, target->imag() + 5.0};
                const auto r = newton_refine(sig, *m.stepper, *target, opts);
                if (r.converged()) error = std::abs(r.eigenvalue.lambda - *target);
            } else {
                const auto sc = propagate(*m.stepper, sig, *a.lambda);
                if (sc.finite()) error = std::abs(sc.a - a_ref);
            }
            if (std::isnan(error)) ++failures;
            rows.push_back({m.name, n, error});
        }
    }

    emit(a.out, out, [&](std::ostream& o) {
        o << "method,n,error\n";
        for (const auto& r : rows) o << r.method << ',' << r.n << ',' << format_number(r.error) << '\n';
    });

    // Least-squares log-log slope per method.
    Json slopes = Json::object();
    for (const auto& m : methods) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (const auto& r : rows) {
            if (r.method != m.name || !(r.error > 0.0)) continue;
            const double x = std::log(static_cast<double>(r.n));
            const double y = std::log(r.error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        slopes[m.name] = cnt >= 2 ? Json((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)) : Json(nullptr);
    }
    Json config = a.pulse.to_json();
    config["t1"] = t1;
    config["t2"] = t2;
    config["methods"] = a.methods;
    config["n"] = a.ns;
    if (target) config["target_eig"] = complex_json(*target);
    if (a.lambda) {
        config["lambda"] = *a.lambda;
        config["a_reference"] = complex_json(a_ref);
    }
    Json residuals{{"slopes", slopes}, {"failures", failures}};
    write_report(report_path(a.common, a.out), make_report("bench", config, residuals, Json::array(), a.common, clock));
    if (failures > 0) err << "bench: " << failures << " run(s) produced no estimate (error reported as nan)\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinear Fourier transform of finitely supported signals (Zakharov-Shabat system)", "nft"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nft 1.0.0");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Sample a pulse and write a signal CSV");
    add_pulse_options(*g, gen.pulse);
    add_common(*g, gen.common);
    g->add_option("--out", gen.out, "Signal CSV path (default stdout)");

    NftArgs nft;
    auto* n = app.add_subcommand("nft", "Continuous spectrum and (with --discrete) eigenvalue search");
    add_pulse_options(*n, nft.pulse);
    add_common(*n, nft.common);
    add_search(*n, nft.search);
    n->add_flag("--discrete", nft.discrete, "Also search the discrete spectrum");
    n->add_option("--out", nft.out, "Output directory (spectrum.csv, discrete.csv, report.json)");

    EigArgs eig;
    auto* e = app.add_subcommand("eig", "Discrete spectrum from a matrix eigenvalue problem");
    add_pulse_options(*e, eig.pulse);
    add_common(*e, eig.common);
    e->add_option("--matrix", eig.matrix, "cd, al, al-simple, al-norm, spectral");
    e->add_option("--modes", eig.modes, "Fourier modes M for the spectral matrix (even)");
    e->add_option("--threshold", eig.threshold, "Minimum Im λ of a physical eigenvalue");
    e->add_flag("--refine", eig.refine, "Polish each candidate by Newton iteration");
    e->add_option("--refine-method", eig.refine_method, "Transfer method for refinement and q̃");
    e->add_option("--dump-matrix", eig.dump, "Write the matrix to this file");
    e->add_option("--out", eig.out, "Discrete CSV path or output directory (default stdout)");

    SweepArgs sweep;
    auto* s = app.add_subcommand("sweep", "Eigenvalue locus over a pulse parameter");
    add_pulse_options(*s, sweep.pulse);
    add_common(*s, sweep.common);
    add_search(*s, sweep.search);
    s->add_option("--param", sweep.param, "amp, phase, linear_chirp, quad_chirp, dilation, delay")->required();
    s->add_option("--from", sweep.from, "First parameter value")->required();
    s->add_option("--to", sweep.to, "Last parameter value")->required();
    s->add_option("--steps", sweep.steps, "Number of parameter values");
    s->add_option("--matrix", sweep.matrix, "Use this matrix method instead of the search");
    s->add_option("--out", sweep.out, "Locus CSV path (default stdout)");

    PropagateArgs prop;
    auto* p = app.add_subcommand("propagate", "Split-step propagation of j q_z = q_tt + 2|q|^2 q");
    add_pulse_options(*p, prop.pulse);
    add_common(*p, prop.common);
    p->add_option("--z", prop.z, "Propagation distance")->required();
    p->add_option("--steps", prop.steps, "Number of split steps");
    p->add_option("--padding", prop.padding, "Periodic window as a multiple of the signal length");
    p->add_flag("--keep-padding", prop.keep_padding, "Output the whole padded window");
    p->add_option("--t0-ps", prop.t0_ps, "Time unit in ps; adds fiber units to the report");
    p->add_option("--out", prop.out, "Signal CSV path (default stdout)");

    TraceArgs trace;
    auto* t = app.add_subcommand("trace", "Trace-formula energy budget");
    add_pulse_options(*t, trace.pulse);
    add_common(*t, trace.common);
    add_search(*t, trace.search);
    t->add_option("--eigs", trace.eigs, "Discrete CSV to use instead of searching");
    t->add_option("--tol", trace.tol, "Fail when the relative E1 residual is not below this");
    t->add_option("--out", trace.out, "JSON report path (default stdout)");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Error versus sample count for each method");
    add_pulse_options(*b, bench.pulse, false);
    add_common(*b, bench.common);
    b->add_option("--methods", bench.methods, "all, matrices, or a list of methods (matrix:NAME for matrices)");
    b->add_option("--n", bench.ns, "Comma-separated sample counts");
    b->add_option("--target-eig", bench.target_eig, "Eigenvalue whose error is measured, e.g. 2.2j");
    b->add_option("--lambda", bench.lambda, "Real λ at which the error in a(λ) is measured");
    b->add_option("--out", bench.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen, out);
        if (*n) return cmd_nft(nft, out, err);
        if (*e) return cmd_eig(eig, out, err);
        if (*s) return cmd_sweep(sweep, out, err);
        if (*p) return cmd_propagate(prop, out, err);
        if (*t) return cmd_trace(trace, out, err);
        if (*b) return cmd_bench(bench, out, err);
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const Error& ex) {
        err << "computation failed: " << ex.what() << '\n';
        return kExitFailure;
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::runtime_error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("nft");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nft::cli
