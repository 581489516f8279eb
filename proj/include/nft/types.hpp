#ifndef NFT_TYPES_HPP
#define NFT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nft {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr cplx kJ{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// a(λ) vanished where a finite ratio b/a was requested, or a closed-form
/// expression hit a singularity.
class PoleError : public Error {
public:
    using Error::Error;
};

/// a'(λ) vanished at an eigenvalue (multiple zero of a).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace nft

#endif  // NFT_TYPES_HPP
