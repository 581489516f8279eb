#include "nft/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nft/continuous.hpp"
#include "nft/signal.hpp"
#include "nft/zs_core.hpp"

namespace nft {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    const char* first = text.data() + b;
    if (b < e && *first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, text.data() + e, v);
    if (res.ec != std::errc() || res.ptr != text.data() + e || first == text.data() + e) {
        throw std::runtime_error("not a number: '" + text + "'");
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

void expect_header(std::istream& in, const std::string& header) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != header) {
        throw std::runtime_error("expected CSV header '" + header + "'");
    }
}

}  // namespace

void write_signal_csv(std::ostream& out, const Signal& signal) {
    out << "t,re,im\n";
    const TimeGrid& g = signal.grid();
    for (std::size_t k = 0; k < signal.size(); ++k) {
        out << format_number(g.node(k)) << ',' << format_number(signal[k].real()) << ','
            << format_number(signal[k].imag()) << '\n';
    }
}

void write_signal_csv(const std::string& path, const Signal& signal) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_signal_csv(out, signal);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Signal read_signal_csv(std::istream& in) {
    expect_header(in, "t,re,im");
    std::vector<double> t;
    std::vector<cplx> q;
    std::string line;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw std::runtime_error("row " + std::to_string(row) + ": expected 3 fields");
        t.push_back(parse_double(f[0]));
        q.emplace_back(parse_double(f[1]), parse_double(f[2]));
        if (!std::isfinite(q.back().real()) || !std::isfinite(q.back().imag())) {
            throw std::runtime_error("row " + std::to_string(row) + ": non-finite sample");
        }
    }
    if (t.size() < 3) throw std::runtime_error("signal CSV needs at least 3 rows");
    const std::size_t n = t.size() - 1;
    TimeGrid grid = make_grid(t.front(), t.back(), static_cast<long long>(n));
    for (std::size_t k = 0; k <= n; ++k) {
        if (std::abs(t[k] - grid.node(k)) > 1e-9 * grid.eps() + 1e-12 * std::abs(t[k])) {
            throw std::runtime_error("signal CSV nodes are not uniformly spaced (row " + std::to_string(k + 2) + ")");
        }
    }
    return Signal(grid, std::move(q));
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open signal file '" + path + "'");
    return read_signal_csv(in);
}

void write_spectrum_csv(std::ostream& out, const ContinuousSpectrum& spectrum) {
    out << "lambda,re_qhat,im_qhat,re_a,im_a,re_b,im_b\n";
    for (const auto& p : spectrum.points) {
        out << format_number(p.lambda) << ',' << format_number(p.qhat.real()) << ',' << format_number(p.qhat.imag())
            << ',' << format_number(p.a.real()) << ',' << format_number(p.a.imag()) << ','
            << format_number(p.b.real()) << ',' << format_number(p.b.imag()) << '\n';
    }
}

void write_discrete_csv(std::ostream& out, std::span<const DiscreteEigenvalue> eigenvalues) {
    out << "re_lambda,im_lambda,re_qtilde,im_qtilde,residual\n";
    for (const auto& e : eigenvalues) {
        out << format_number(e.lambda.real()) << ',' << format_number(e.lambda.imag()) << ','
            << format_number(e.qtilde.real()) << ',' << format_number(e.qtilde.imag()) << ','
            << format_number(e.residual) << '\n';
    }
}

std::vector<DiscreteEigenvalue> read_discrete_csv(std::istream& in) {
    expect_header(in, "re_lambda,im_lambda,re_qtilde,im_qtilde,residual");
    std::vector<DiscreteEigenvalue> out;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5) throw std::runtime_error("discrete CSV row needs 5 fields");
        DiscreteEigenvalue e;
        e.lambda = {parse_double(f[0]), parse_double(f[1])};
        e.qtilde = {parse_double(f[2]), parse_double(f[3])};
        e.residual = parse_double(f[4]);
        out.push_back(e);
    }
    return out;
}

}  // namespace nft
