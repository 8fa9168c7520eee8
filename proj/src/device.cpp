#include "qrec/device.hpp"

namespace qrec {

void MatrixDevice::apply(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  if (s.layout().reg(target).width != u_.qubits()) throw DimensionError("device width does not match register");
  s.apply_matrix(u_.matrix(), target, filter);
}

void MatrixDevice::apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  if (s.layout().reg(target).width != u_.qubits()) throw DimensionError("device width does not match register");
  s.apply_matrix(u_.matrix().adjoint(), target, filter);
}

CircuitDevice::CircuitDevice(GateSet gs, Circuit c) : gs_(std::move(gs)), c_(std::move(c)) { validate(gs_, c_); }

void CircuitDevice::apply(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  app_inplace(s, gs_, c_, target, filter);
}

void CircuitDevice::apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  app_inverse_inplace(s, gs_, c_, target, filter);
}

std::string CircuitDevice::describe() const {
  std::string out = "circuit[";
  for (std::size_t i = 0; i < c_.gates.size(); ++i) {
    if (i) out += ' ';
    out += gs_[c_.gates[i].gate].name + "(";
    for (std::size_t j = 0; j < c_.gates[i].targets.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(c_.gates[i].targets[j]);
    }
    out += ')';
  }
  return out + "]";
}

CountingDevice::CountingDevice(DevicePtr inner, std::shared_ptr<QueryCounter> counter, std::string label)
    : inner_(std::move(inner)), counter_(std::move(counter)), label_(std::move(label)) {
  if (!inner_ || !counter_) throw std::invalid_argument("CountingDevice needs a device and a counter");
}

void CountingDevice::apply(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  counter_->add(label_);
  inner_->apply(s, target, filter);
}

void CountingDevice::apply_adjoint(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  counter_->add(label_);
  inner_->apply_adjoint(s, target, filter);
}

BlackBox::BlackBox(DevicePtr inner, std::shared_ptr<QueryCounter> counter, std::string label)
    : inner_(std::move(inner)), counter_(std::move(counter)), label_(std::move(label)) {
  if (!inner_ || !counter_) throw std::invalid_argument("BlackBox needs a device and a counter");
}

void BlackBox::apply(StateVector& s, std::string_view target, const BranchFilter& filter) const {
  counter_->add(label_);
  inner_->apply(s, target, filter);
}

void BlackBox::apply_controlled(StateVector& s, std::string_view control, std::string_view target) const {
  const Register& c = s.layout().reg(control);
  if (c.width != 1) throw DimensionError("control register must have width 1");
  const int bit = c.offset;
  apply(s, target, [bit](std::uint64_t i) { return (i >> bit & 1) != 0; });
}

void BlackBox::apply_adjoint(StateVector&, std::string_view, const BranchFilter&) const {
  throw BlackBoxViolation("inverse of black box '" + label_ + "' is not available");
}

Matrix BlackBox::matrix() const { throw BlackBoxViolation("matrix of black box '" + label_ + "' is not available"); }

DevicePtr make_matrix_device(const Matrix& u) { return std::make_shared<MatrixDevice>(DenseUnitary(u)); }

DevicePtr make_circuit_device(const GateSet& gs, const Circuit& c) { return std::make_shared<CircuitDevice>(gs, c); }

DevicePtr make_code_device(const CodeSpace& space, std::uint64_t code) {
  return std::make_shared<CircuitDevice>(space.gate_set(), space.decode(code));
}

namespace {

void check_counter(const StateVector& state, std::string_view counter, int L) {
  const Register& r = state.layout().reg(counter);
  if ((std::uint64_t{1} << r.width) != static_cast<std::uint64_t>(L)) {
    throw DimensionError("counter register '" + r.name + "' must have width log2(L)");
  }
}

}  // namespace

void u_seq_inplace(StateVector& state, const Device& u, std::string_view counter, std::string_view target, int L) {
  check_counter(state, counter, L);
  const Register& r = state.layout().reg(counter);
  const std::uint64_t mask = static_cast<std::uint64_t>(L) - 1;
  const int off = r.offset;
  for (int j = 1; j < L; ++j) {
    const auto jj = static_cast<std::uint64_t>(j);
    u.apply(state, target, [=](std::uint64_t i) { return ((i >> off) & mask) >= jj; });
  }
}

void u_seq_inverse_inplace(StateVector& state, const Device& u, std::string_view counter, std::string_view target,
                           int L) {
  check_counter(state, counter, L);
  const Register& r = state.layout().reg(counter);
  const std::uint64_t mask = static_cast<std::uint64_t>(L) - 1;
  const int off = r.offset;
  for (int j = L - 1; j >= 1; --j) {
    const auto jj = static_cast<std::uint64_t>(j);
    u.apply_adjoint(state, target, [=](std::uint64_t i) { return ((i >> off) & mask) >= jj; });
  }
}

StateVector u_seq(const StateVector& state, const Device& u, std::string_view counter, std::string_view target,
                  int L) {
  StateVector out = state;
  u_seq_inplace(out, u, counter, target, L);
  return out;
}

}  // namespace qrec
