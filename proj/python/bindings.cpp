#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "nft/continuous.hpp"
#include "nft/discrete_matrix.hpp"
#include "nft/discrete_search.hpp"
#include "nft/nls_prop.hpp"
#include "nft/oracles.hpp"
#include "nft/signal.hpp"
#include "nft/steppers.hpp"

namespace py = pybind11;
using nft::cplx;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

nft::Signal make_signal(double t1, double t2, py::array_t<cplx, py::array::c_style | py::array::forcecast> q) {
    if (q.ndim() != 1 || q.size() < 3) throw std::invalid_argument("samples must be a 1-d array of at least 3 values");
    std::vector<cplx> s(q.data(), q.data() + q.size());
    const auto grid = nft::make_grid(t1, t2, static_cast<long long>(s.size()) - 1);
    return nft::Signal(grid, std::move(s));
}

nft::PulseSpec make_spec(const std::string& family, cplx amp, double scale, double chirp, double qchirp, double phase,
                         double rolloff, const std::vector<std::pair<cplx, double>>& train,
                         const std::string& train_base) {
    nft::PulseSpec s;
    s.family = nft::parse_family(family);
    s.amplitude = amp;
    s.scale = scale;
    s.linear_chirp = chirp;
    s.quad_chirp = qchirp;
    s.phase = phase;
    s.rolloff = rolloff;
    s.train_base = nft::parse_family(train_base);
    for (const auto& [a, d] : train) s.train.push_back({a, d});
    nft::validate(s);
    return s;
}

py::dict eigen_dict(const nft::DiscreteEigenvalue& e) {
    py::dict d;
    d["lambda"] = e.lambda;
    d["qtilde"] = e.qtilde;
    d["residual"] = e.residual;
    d["multiplicity_hint"] = e.multiplicity_hint;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlinear Fourier transform of finitely supported signals (Zakharov-Shabat system).";

    py::register_exception<nft::Error>(m, "NftError", PyExc_RuntimeError);

    py::class_<nft::Signal>(m, "Signal")
        .def(py::init(&make_signal), py::arg("t1"), py::arg("t2"), py::arg("samples"))
        .def_property_readonly("t1", [](const nft::Signal& s) { return s.grid().t1(); })
        .def_property_readonly("t2", [](const nft::Signal& s) { return s.grid().t2(); })
        .def_property_readonly("n", [](const nft::Signal& s) { return s.grid().n(); })
        .def_property_readonly("eps", [](const nft::Signal& s) { return s.grid().eps(); })
        .def_property_readonly("t", [](const nft::Signal& s) { return to_array(s.grid().nodes()); })
        .def_property_readonly("samples", [](const nft::Signal& s) {
            return to_array(std::vector<cplx>(s.samples().begin(), s.samples().end()));
        })
        .def("__len__", &nft::Signal::size);

    m.def(
        "generate",
        [](const std::string& family, cplx amp, double t1, double t2, long long n, double scale, double chirp,
           double qchirp, double phase, double rolloff, const std::vector<std::pair<cplx, double>>& train,
           const std::string& train_base) {
            const auto spec = make_spec(family, amp, scale, chirp, qchirp, phase, rolloff, train, train_base);
            return nft::generate(spec, nft::make_grid(t1, t2, n));
        },
        py::arg("family"), py::arg("amp") = cplx{1.0, 0.0}, py::arg("t1") = -10.0, py::arg("t2") = 10.0,
        py::arg("n") = 1024, py::arg("scale") = 1.0, py::arg("chirp") = 0.0, py::arg("qchirp") = 0.0,
        py::arg("phase") = 0.0, py::arg("rolloff") = 0.5, py::arg("train") = std::vector<std::pair<cplx, double>>{},
        py::arg("train_base") = "sinc", "Sample a pulse family on n intervals of [t1, t2].");

    m.def(
        "auto_window",
        [](const std::string& family, cplx amp, double scale, double fraction) {
            return nft::auto_window(make_spec(family, amp, scale, 0, 0, 0, 0.5, {}, "sinc"), fraction);
        },
        py::arg("family"), py::arg("amp") = cplx{1.0, 0.0}, py::arg("scale") = 1.0, py::arg("fraction") = 0.9999);

    m.def("conserved", [](const nft::Signal& s, int k) { return nft::conserved(s, k); }, py::arg("signal"),
          py::arg("k"), "Time-domain invariant E_k, k in 1..3.");

    m.def(
        "scattering",
        [](const nft::Signal& s, cplx lambda, const std::string& method, bool derivative) {
            nft::PropagateOptions opt;
            opt.with_derivative = derivative;
            const auto c = nft::propagate(nft::parse_method(method), s, lambda, opt);
            py::dict d;
            d["a"] = c.a;
            d["b"] = c.b;
            if (c.a_prime) d["a_prime"] = *c.a_prime;
            if (c.b_prime) d["b_prime"] = *c.b_prime;
            return d;
        },
        py::arg("signal"), py::arg("lam"), py::arg("method") = "layer-peeling", py::arg("derivative") = false,
        "Scattering coefficients a, b (and a', b') at one λ.");

    m.def(
        "continuous_spectrum",
        [](const nft::Signal& s, const std::string& method, double lmin, double lmax, long long mesh) {
            const auto spec = nft::continuous_spectrum(s, nft::parse_method(method), nft::make_mesh(lmin, lmax, mesh));
            std::vector<double> lam;
            std::vector<cplx> qhat, a, b;
            std::vector<bool> pole;
            for (const auto& p : spec.points) {
                lam.push_back(p.lambda);
                qhat.push_back(p.qhat);
                a.push_back(p.a);
                b.push_back(p.b);
                pole.push_back(p.pole);
            }
            py::dict d;
            d["lambda"] = to_array(lam);
            d["qhat"] = to_array(qhat);
            d["a"] = to_array(a);
            d["b"] = to_array(b);
            d["pole"] = pole;
            return d;
        },
        py::arg("signal"), py::arg("method") = "layer-peeling", py::arg("lmin") = -20.0, py::arg("lmax") = 20.0,
        py::arg("mesh") = 2001);

    m.def(
        "find_eigenvalues",
        [](const nft::Signal& s, const std::string& method, std::uint64_t seed, double lmin, double lmax,
           long long mesh) {
            nft::NewtonOptions opts;
            opts.rng_seed = seed;
            const auto r = nft::find_eigenvalues(s, nft::parse_method(method), opts, nft::make_mesh(lmin, lmax, mesh));
            py::list all, phys;
            for (const auto& e : r.eigenvalues) all.append(eigen_dict(e));
            for (const auto& e : r.physical()) phys.append(eigen_dict(e));
            py::dict d;
            d["eigenvalues"] = phys;
            d["all"] = all;
            d["complete"] = r.complete;
            d["draws"] = r.draws;
            d["e_time"] = r.trace.e_time;
            d["e_cont"] = r.trace.e_cont;
            d["e_disc"] = r.trace.e_disc;
            d["residual"] = r.trace.residual;
            return d;
        },
        py::arg("signal"), py::arg("method") = "layer-peeling", py::arg("seed") = 1, py::arg("lmin") = -20.0,
        py::arg("lmax") = 20.0, py::arg("mesh") = 2001, "Newton search for the discrete spectrum with trace closure.");

    m.def(
        "newton_refine",
        [](const nft::Signal& s, cplx lambda0, const std::string& method) {
            const auto r = nft::newton_refine(s, nft::parse_method(method), lambda0);
            py::dict d;
            d["status"] = nft::to_string(r.status);
            d["lambda"] = r.converged() ? r.eigenvalue.lambda : r.last;
            d["qtilde"] = r.eigenvalue.qtilde;
            d["iterations"] = r.iterations;
            return d;
        },
        py::arg("signal"), py::arg("lambda0"), py::arg("method") = "layer-peeling");

    m.def(
        "matrix_eigenvalues",
        [](const nft::Signal& s, const std::string& matrix, std::optional<int> modes) {
            std::vector<cplx> out;
            for (const auto& c : nft::matrix_eigenvalues(s, nft::parse_matrix_method(matrix), std::nullopt, modes)) {
                out.push_back(c.lambda);
            }
            return out;
        },
        py::arg("signal"), py::arg("matrix") = "spectral", py::arg("modes") = std::nullopt,
        "Filtered eigenvalues of a matrix discretization (cd, al, al-simple, al-norm, spectral).");

    m.def(
        "ssf_propagate",
        [](const nft::Signal& s, double z, std::size_t steps, double padding) {
            nft::PropagationPlan plan;
            plan.distance = z;
            plan.steps = steps;
            plan.padding = padding;
            auto r = nft::ssf_propagate(s, plan);
            return py::make_tuple(r.signal, r.leakage);
        },
        py::arg("signal"), py::arg("z"), py::arg("steps") = 1000, py::arg("padding") = 2.0,
        "Split-step propagation; returns (signal, leakage).");

    m.def("sy_a", &nft::sy_a, py::arg("amp"), py::arg("lam"));
    m.def("sy_continuous", &nft::sy_continuous, py::arg("amp"), py::arg("lam"));
    m.def("sy_discrete", &nft::sy_discrete, py::arg("amp"));
    m.def("rect_discrete", &nft::rect_discrete, py::arg("amp"), py::arg("t1"), py::arg("t2"));
    m.def("rect_continuous", &nft::rect_continuous, py::arg("amp"), py::arg("t1"), py::arg("t2"), py::arg("lam"));
    m.def("klaus_shaw_count", &nft::klaus_shaw_count, py::arg("l1"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = nft::cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end; returns (exit code, stdout, stderr).");
}
