#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

#include "qrec/types.hpp"

namespace qrec {

// Counter-based generator: the n-th output is a pure function of (key, n).
// Named sub-streams derive their keys from the parent key only, never from
// how many numbers the parent has produced, so results do not depend on the
// order in which trials or registers are evaluated.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Independent stream identified by a name and optional integer indices.
  Rng stream(std::string_view name, std::initializer_list<std::uint64_t> indices = {}) const {
    std::uint64_t h = key_ ^ 0xcbf29ce484222325ULL;
    for (char c : name) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    for (std::uint64_t i : indices) h = mix(h ^ mix(i + 0x2545f4914f6cdd1dULL));
    Rng out;
    out.key_ = mix(h);
    return out;
  }

  Rng stream(std::string_view name, std::uint64_t index) const { return stream(name, {index}); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return (*this)();
    const std::uint64_t limit = max() - max() % span;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return lo + x % span;
  }

  double normal() {
    // Box-Muller; one of the pair is discarded to keep outputs stateless.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  Complex complex_normal() { return {normal(), normal()}; }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Haar-random unit vector in C^dim (normalized complex Gaussian).
Vector haar_vector(Rng& rng, Eigen::Index dim);

/// Haar-random unitary via QR of a complex Gaussian matrix with phase fix.
Matrix haar_unitary(Rng& rng, Eigen::Index dim);

/// Haar-random unit vector inside the column span of an orthonormal basis.
Vector haar_vector_in_span(Rng& rng, const Matrix& basis);

}  // namespace qrec
