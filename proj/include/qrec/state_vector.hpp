#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrec/dense_unitary.hpp"
#include "qrec/register_layout.hpp"
#include "qrec/rng.hpp"

namespace qrec {

// Predicate on a basis index; kernels skip branches where it is false. It is
// evaluated on the index with the acted-on qubits cleared, so it must not
// depend on them.
using BranchFilter = std::function<bool(std::uint64_t)>;

class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-9;

  /// All registers in |0>.
  explicit StateVector(RegisterLayout layout);

  static StateVector basis(RegisterLayout layout, std::uint64_t index);
  static StateVector basis(RegisterLayout layout, const std::map<std::string, std::uint64_t>& values);
  static StateVector from_amplitudes(RegisterLayout layout, Vector amps);
  /// Tensor product of per-register vectors; registers not listed start in |0>.
  static StateVector product(RegisterLayout layout, const std::map<std::string, Vector>& parts);

  const RegisterLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amps_; }
  Complex amplitude(std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
  std::uint64_t dim() const { return layout_.dim(); }

  double norm() const { return amps_.norm(); }
  Complex inner(const StateVector& other) const;

  // In-place kernels. Composite operators chain these instead of copying.
  void apply_matrix(const Matrix& u, std::span<const int> qubits, const BranchFilter& filter = {});
  void apply_matrix(const Matrix& u, std::string_view reg, const BranchFilter& filter = {});
  void apply_diagonal(const std::function<Complex(std::uint64_t)>& phase);
  /// perm must be a bijection on basis indices.
  void apply_permutation(const std::function<std::uint64_t(std::uint64_t)>& perm);
  /// |v><v| reflection on one register: x -> x - 2 v <v|x> on every branch.
  void reflect_about(const Vector& v, std::string_view reg);
  void scale(Complex c) { amps_ *= c; }

  void check_normalized(const char* where) const;

  /// Text dump: one "index re im" line per amplitude with magnitude >= 1e-12.
  std::string to_text() const;

 private:
  StateVector(RegisterLayout layout, Vector amps);

  RegisterLayout layout_;
  Vector amps_;
};

struct MeasureResult {
  std::uint64_t outcome = 0;
  StateVector collapsed;
};

StateVector apply(const StateVector& state, const DenseUnitary& u, std::string_view target);
StateVector apply_controlled(const StateVector& state, const DenseUnitary& u, std::string_view control,
                             std::string_view target);
MeasureResult measure(const StateVector& state, std::string_view reg, Rng& rng);
std::vector<double> distribution(const StateVector& state, std::string_view reg);

/// Index drawn from a discrete distribution by inverse CDF with uniform u in [0,1).
std::uint64_t sample_index(const std::vector<double>& probs, double u);

}  // namespace qrec
