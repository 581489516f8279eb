#ifndef NFT_CLI_CLI_HPP
#define NFT_CLI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nft::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // computation did not converge or close
inline constexpr int kExitUsage = 2;

/// Runs exactly one subcommand. Text output (CSV or JSON written to stdout)
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nft::cli

#endif  // NFT_CLI_CLI_HPP
