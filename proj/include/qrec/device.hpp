#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qrec/circuit.hpp"
#include "qrec/query_counter.hpp"

namespace qrec {

class BlackBoxViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A unitary that can be applied to a register of a state, optionally only on
// selected branches (the controlled form).
class Device {
 public:
  virtual ~Device() = default;
  virtual int qubits() const = 0;
  virtual void apply(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const = 0;
  virtual void apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const = 0;
  virtual Matrix matrix() const = 0;
  virtual std::string describe() const = 0;
};

using DevicePtr = std::shared_ptr<const Device>;

class MatrixDevice final : public Device {
 public:
  explicit MatrixDevice(DenseUnitary u) : u_(std::move(u)) {}
  int qubits() const override { return u_.qubits(); }
  void apply(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  void apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  Matrix matrix() const override { return u_.matrix(); }
  std::string describe() const override { return "matrix(" + std::to_string(u_.dim()) + ")"; }

 private:
  DenseUnitary u_;
};

class CircuitDevice final : public Device {
 public:
  CircuitDevice(GateSet gs, Circuit c);
  int qubits() const override { return c_.n; }
  void apply(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  void apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  Matrix matrix() const override { return build_matrix(gs_, c_); }
  std::string describe() const override;
  const Circuit& circuit() const { return c_; }
  const GateSet& gate_set() const { return gs_; }

 private:
  GateSet gs_;
  Circuit c_;
};

// White-box device whose every application (forward or inverse) is tallied.
class CountingDevice final : public Device {
 public:
  CountingDevice(DevicePtr inner, std::shared_ptr<QueryCounter> counter, std::string label = "U");
  int qubits() const override { return inner_->qubits(); }
  void apply(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  void apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  Matrix matrix() const override { return inner_->matrix(); }
  std::string describe() const override { return inner_->describe(); }

 private:
  DevicePtr inner_;
  std::shared_ptr<QueryCounter> counter_;
  std::string label_;
};

// Opaque handle: forward application only, always counted. Inverse and matrix
// access throw.
class BlackBox final : public Device {
 public:
  BlackBox(DevicePtr inner, std::shared_ptr<QueryCounter> counter, std::string label = "U");
  int qubits() const override { return inner_->qubits(); }
  void apply(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  void apply_controlled(StateVector& s, std::string_view control, std::string_view target) const;
  void apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter = {}) const override;
  Matrix matrix() const override;
  std::string describe() const override { return "black box '" + label_ + "'"; }
  const std::string& label() const { return label_; }
  const QueryCounter& counter() const { return *counter_; }

 private:
  DevicePtr inner_;
  std::shared_ptr<QueryCounter> counter_;
  std::string label_;
};

DevicePtr make_matrix_device(const Matrix& u);
DevicePtr make_circuit_device(const GateSet& gs, const Circuit& c);
DevicePtr make_code_device(const CodeSpace& space, std::uint64_t code);

/// Branch with counter value a receives U^a on the target: for j = 1..L-1,
/// apply U iff j <= a. Uses L-1 controlled applications.
void u_seq_inplace(StateVector& state, const Device& u, std::string_view counter, std::string_view target, int L);
/// Exact inverse of u_seq_inplace; needs a white-box device.
void u_seq_inverse_inplace(StateVector& state, const Device& u, std::string_view counter, std::string_view target,
                           int L);
StateVector u_seq(const StateVector& state, const Device& u, std::string_view counter, std::string_view target, int L);

}  // namespace qrec
