#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qrec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest simulated register width (qubits) for a dense statevector.
inline constexpr int kMaxWidth = 24;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotUnitaryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Wraps a real number onto the unit circle [0, 1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Distance between two frequencies on the circle of circumference 1.
inline double circular_distance(double a, double b) {
  double d = std::fabs(wrap_unit(a) - wrap_unit(b));
  return std::min(d, 1.0 - d);
}

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline int log2_exact(std::uint64_t x) {
  if (!is_power_of_two(x)) {
    throw DimensionError("expected a power of two, got " + std::to_string(x));
  }
  int k = 0;
  while ((std::uint64_t{1} << k) < x) ++k;
  return k;
}

inline Complex phase(double cycles) { return std::polar(1.0, kTwoPi * cycles); }

}  // namespace qrec
