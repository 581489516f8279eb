#ifndef NFT_CSV_IO_HPP
#define NFT_CSV_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nft/types.hpp"

namespace nft {

class Signal;
struct ContinuousSpectrum;
struct DiscreteEigenvalue;

/// Shortest round-trip-safe text for a double: 17 significant digits, '.'
/// separator, independent of the global locale.
std::string format_number(double value);

/// Header `t,re,im`, one row per grid node.
void write_signal_csv(std::ostream& out, const Signal& signal);
void write_signal_csv(const std::string& path, const Signal& signal);

/// Parses a signal CSV. Nodes must be uniformly spaced (relative tolerance
/// 1e-9 of the step). Throws std::runtime_error on malformed input.
Signal read_signal_csv(std::istream& in);
Signal read_signal_csv(const std::string& path);

/// Header `lambda,re_qhat,im_qhat,re_a,im_a,re_b,im_b`.
void write_spectrum_csv(std::ostream& out, const ContinuousSpectrum& spectrum);

/// Header `re_lambda,im_lambda,re_qtilde,im_qtilde,residual`.
void write_discrete_csv(std::ostream& out, std::span<const DiscreteEigenvalue> eigenvalues);
std::vector<DiscreteEigenvalue> read_discrete_csv(std::istream& in);

/// Splits one CSV line on commas (no quoting; the formats above never need it).
std::vector<std::string> split_csv_line(const std::string& line);

/// Locale-independent strict double parse.
double parse_double(const std::string& text);

}  // namespace nft

#endif  // NFT_CSV_IO_HPP
