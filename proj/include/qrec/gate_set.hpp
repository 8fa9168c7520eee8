#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qrec/dense_unitary.hpp"

namespace qrec {

// Matrix convention for multi-qubit gates: bit i of the matrix index is the
// i-th listed target. CNOT targets are (control, target).
struct GateSpec {
  std::string name;
  int arity = 1;
  DenseUnitary unitary;
};

class GateSet {
 public:
  GateSet(std::string name, std::vector<GateSpec> gates);

  /// {H, T, X, CNOT}
  static GateSet standard();
  /// {X, Z, CZ, SWAP}; each gate is an involution.
  static GateSet involutive();
  /// {X, S, T, CNOT}; diagonal/permutation gates with spectra on the 1/8 grid.
  static GateSet phase_grid();
  static GateSet by_name(std::string_view name);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(gates_.size()); }
  const GateSpec& operator[](int i) const { return gates_.at(static_cast<std::size_t>(i)); }
  int index_of(std::string_view gate) const;
  const std::vector<GateSpec>& gates() const { return gates_; }

 private:
  std::string name_;
  std::vector<GateSpec> gates_;
};

}  // namespace qrec
