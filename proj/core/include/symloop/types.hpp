#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace symloop {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

// Default sample count on the unit circle. Divisible by 2, 3 and 4 so that
// every k-th root of unity with k <= 4 is itself a sample point.
inline constexpr int kDefaultSampleCount = 192;

inline constexpr double kUnitModulusTol = 1e-12;
inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kDropTol = 1e-13;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kSubspaceTol = 1e-6;

// omega^power with omega = exp(2 pi i / k).
struct RootOfUnity {
  int k = 1;
  int power = 1;

  cplx value() const {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(power) / k;
    return std::polar(1.0, angle);
  }
  RootOfUnity pow(int e) const { return {k, power * e}; }
  // Reduced order of the element, i.e. the smallest l > 0 with value()^l = 1.
  int order() const;
};

}  // namespace symloop
