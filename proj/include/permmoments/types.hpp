#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace pm {

/// Exact rational scalar used by the exact-arithmetic path.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
inline constexpr bool is_floating_v = std::is_floating_point_v<Scalar>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

// Errors. Every failure mode the library reports has its own type so the CLI
// can map it to an exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidDataset : Error {
  using Error::Error;
};
struct ZeroVariance : Error {
  using Error::Error;
};
struct KTooLarge : Error {
  using Error::Error;
};
struct NTooLarge : Error {
  using Error::Error;
};
struct UnsupportedOrder : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace pm
