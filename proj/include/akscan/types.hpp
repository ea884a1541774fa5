#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>

namespace akscan {

// 80-bit extended precision throughout. Covariance entries reach ~cosh(10)
// at the corners of the default parameter window, where double-precision
// rounding alone already exceeds the 1e-9 purity tolerances this library
// promises.
using Real = long double;
using Complex = std::complex<Real>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Real pi = std::numbers::pi_v<Real>;

// Eigensolver or factorization failure, as opposed to a caller error.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace akscan
