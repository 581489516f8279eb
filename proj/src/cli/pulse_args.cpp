#include "pulse_args.hpp"

#include <cctype>
#include <stdexcept>

#include <CLI11.hpp>

#include "nft/csv_io.hpp"

namespace nft::cli {

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw std::invalid_argument("empty complex number");
    const bool imaginary = s.back() == 'j' || s.back() == 'i';
    if (!imaginary) {
        try {
            return {parse_double(s), 0.0};
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("not a complex number: '" + text + "'");
        }
    }
    s.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    try {
        return {re_part.empty() ? 0.0 : parse_double(re_part), parse_double(im_part)};
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("not a complex number: '" + text + "'");
    }
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    for (const auto& f : split_csv_line(text)) {
        if (!f.empty()) out.push_back(parse_complex(f));
    }
    return out;
}

std::vector<TrainComponent> parse_train(const std::string& text) {
    std::vector<TrainComponent> out;
    for (const auto& f : split_csv_line(text)) {
        if (f.empty()) continue;
        const auto at = f.find_first_of(":@");
        if (at == std::string::npos) throw std::invalid_argument("train component '" + f + "' needs amp:delay");
        out.push_back({parse_complex(f.substr(0, at)), parse_double(f.substr(at + 1))});
    }
    return out;
}

PulseSpec PulseArgs::spec() const {
    PulseSpec s;
    s.family = parse_family(family);
    s.amplitude = parse_complex(amp);
    s.scale = scale;
    s.linear_chirp = chirp;
    s.quad_chirp = qchirp;
    s.phase = phase;
    s.rolloff = rolloff;
    s.train_base = parse_family(train_base);
    if (!train.empty()) s.train = parse_train(train);
    s.path = file;
    if (s.family == PulseFamily::wavetrain && s.train.empty()) {
        throw std::invalid_argument("--pulse wavetrain needs --train");
    }
    validate(s);
    return s;
}

std::pair<double, double> PulseArgs::bounds(const PulseSpec& s) const {
    if (t1 || t2) {
        if (!t1 || !t2) throw std::invalid_argument("--t1 and --t2 must be given together");
        return {*t1, *t2};
    }
    if (window) {
        if (!(*window > 0.0)) throw std::invalid_argument("--window must be positive");
        return {-*window, *window};
    }
    if (s.family == PulseFamily::file) throw std::invalid_argument("--pulse file needs --in or an explicit window");
    return nft::auto_window(s, energy_fraction);
}

Signal PulseArgs::signal(const PulseSpec& s) const {
    if (!in.empty()) return read_signal_csv(in);
    if (s.family == PulseFamily::file) return read_signal_csv(s.path);
    const auto [a, b] = bounds(s);
    return generate(s, make_grid(a, b, n));
}

Signal PulseArgs::signal() const {
    if (!in.empty()) return read_signal_csv(in);
    return signal(spec());
}

nlohmann::ordered_json PulseArgs::to_json() const {
    nlohmann::ordered_json j;
    if (!in.empty()) {
        j["in"] = in;
        return j;
    }
    j["pulse"] = family;
    j["amp"] = amp;
    j["scale"] = scale;
    j["chirp"] = chirp;
    j["qchirp"] = qchirp;
    j["phase"] = phase;
    if (family == "raised_cosine") j["rolloff"] = rolloff;
    if (!train.empty()) {
        j["train"] = train;
        j["train_base"] = train_base;
    }
    if (!file.empty()) j["file"] = file;
    if (t1) j["t1"] = *t1;
    if (t2) j["t2"] = *t2;
    if (window) j["window"] = *window;
    j["energy_fraction"] = energy_fraction;
    j["n"] = n;
    return j;
}

void add_pulse_options(CLI::App& app, PulseArgs& a, bool with_n) {
    app.add_option("--in", a.in, "Signal CSV (t,re,im); overrides the pulse flags");
    app.add_option("--pulse", a.family, "sech, rect, sinc, gaussian, raised_cosine, wavetrain, file");
    app.add_option("--amp", a.amp, "Complex amplitude, e.g. 2.7, 2j, 1+0.5j");
    app.add_option("--scale", a.scale, "Time scale a in base(a t)");
    app.add_option("--chirp", a.chirp, "Linear chirp w1 (factor e^{-j w1 t})");
    app.add_option("--qchirp", a.qchirp, "Quadratic chirp w2 (factor e^{j w2 t^2})");
    app.add_option("--phase", a.phase, "Constant phase (rad)");
    app.add_option("--rolloff", a.rolloff, "Raised-cosine roll-off in [0, 1]");
    app.add_option("--train", a.train, "Wavetrain components amp:delay,amp:delay,...");
    app.add_option("--train-base", a.train_base, "Wavetrain base family");
    app.add_option("--file", a.file, "Signal CSV for --pulse file");
    app.add_option("--t1", a.t1, "Window start");
    app.add_option("--t2", a.t2, "Window end");
    app.add_option("--window", a.window, "Symmetric window [-T, T]");
    app.add_flag("--auto-window", a.auto_window, "Smallest window holding --energy-fraction of the energy (default)");
    app.add_option("--energy-fraction", a.energy_fraction, "Energy fraction for the auto window");
    if (with_n) app.add_option("--n", a.n, "Number of intervals (n + 1 samples)");
}

}  // namespace nft::cli
