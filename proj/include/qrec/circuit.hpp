#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qrec/gate_set.hpp"
#include "qrec/state_vector.hpp"

namespace qrec {

struct GateOp {
  int gate = 0;
  std::vector<int> targets;
  bool operator==(const GateOp&) const = default;
};

struct Circuit {
  int n = 1;
  std::vector<GateOp> gates;
  bool operator==(const Circuit&) const = default;
};

void validate(const GateSet& gs, const Circuit& c);

/// Applies the circuit to a register of width c.n, optionally only on branches
/// selected by filter.
void app_inplace(StateVector& state, const GateSet& gs, const Circuit& c, std::string_view reg,
                 const BranchFilter& filter = {});
/// Gate adjoints in reverse order.
void app_inverse_inplace(StateVector& state, const GateSet& gs, const Circuit& c, std::string_view reg,
                         const BranchFilter& filter = {});
Matrix build_matrix(const GateSet& gs, const Circuit& c);

// Dense enumeration of all gate sequences of length <= c over n qubits.
// Code 0 is the empty circuit; length-k circuits follow all shorter ones and
// are ordered as mixed-radix numbers with the first gate least significant.
class CodeSpace {
 public:
  CodeSpace(GateSet gates, int n, int c);

  const GateSet& gate_set() const { return gates_; }
  int n() const { return n_; }
  int max_length() const { return c_; }
  /// Number of single-gate placements (gate, ordered distinct targets).
  std::uint64_t actions() const { return actions_.size(); }
  /// T, the number of codes.
  std::uint64_t size() const { return size_; }

  std::uint64_t encode(const Circuit& circuit) const;
  Circuit decode(std::uint64_t code) const;

 private:
  GateSet gates_;
  int n_;
  int c_;
  std::vector<GateOp> actions_;
  std::vector<std::uint64_t> offsets_;  // first code of each length
  std::uint64_t size_ = 0;
};

StateVector app(const CodeSpace& space, std::uint64_t code, const StateVector& state, std::string_view target);
DenseUnitary build_unitary(const CodeSpace& space, std::uint64_t code);

}  // namespace qrec
