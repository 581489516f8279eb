#ifndef NFT_CLI_PULSE_ARGS_HPP
#define NFT_CLI_PULSE_ARGS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nft/signal.hpp"

namespace CLI {
class App;
}

namespace nft::cli {

/// Parses "2", "-1.5", "2.2j", "j", "-j", "1+2j", "3e-2-4.5j".
cplx parse_complex(const std::string& text);

/// Parses a comma-separated list of complex numbers.
std::vector<cplx> parse_complex_list(const std::string& text);

/// Parses "amp:delay,amp:delay,..." wavetrain components.
std::vector<TrainComponent> parse_train(const std::string& text);

/// Pulse and grid flags shared by every subcommand that needs a signal.
struct PulseArgs {
    std::string in;  // signal CSV; overrides the pulse flags
    std::string family = "sech";
    std::string amp = "1";
    double scale = 1.0;
    double chirp = 0.0;
    double qchirp = 0.0;
    double phase = 0.0;
    double rolloff = 0.5;
    std::string train;
    std::string train_base = "sinc";
    std::string file;
    std::optional<double> t1;
    std::optional<double> t2;
    std::optional<double> window;  // symmetric half-width
    bool auto_window = false;
    double energy_fraction = 0.9999;
    long long n = 1024;

    PulseSpec spec() const;
    /// Window from --t1/--t2, --window, or the auto window (the default).
    std::pair<double, double> bounds(const PulseSpec& spec) const;
    Signal signal() const;
    Signal signal(const PulseSpec& spec) const;
    nlohmann::ordered_json to_json() const;
};

void add_pulse_options(CLI::App& app, PulseArgs& args, bool with_n = true);

}  // namespace nft::cli

#endif  // NFT_CLI_PULSE_ARGS_HPP
