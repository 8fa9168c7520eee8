#include "qrec/gate_set.hpp"

#include <cmath>

namespace qrec {

namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return m2(s, s, s, -s);
}

Matrix pauli_x() { return m2(0, 1, 1, 0); }
Matrix pauli_z() { return m2(1, 0, 0, -1); }
Matrix phase_gate(double cycles) { return m2(1, 0, 0, phase(cycles)); }

// Index = bit0 (first target) + 2*bit1 (second target).
Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(3, 1) = 1;
  m(1, 3) = 1;
  return m;
}

Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Matrix swap() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(3, 3) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  return m;
}

}  // namespace

GateSet::GateSet(std::string name, std::vector<GateSpec> gates) : name_(std::move(name)), gates_(std::move(gates)) {
  if (gates_.empty()) throw std::invalid_argument("gate set must not be empty");
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].arity < 1 || gates_[i].unitary.qubits() != gates_[i].arity) {
      throw DimensionError("gate '" + gates_[i].name + "' arity does not match its matrix");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (gates_[i].name == gates_[j].name) throw std::invalid_argument("duplicate gate name '" + gates_[i].name + "'");
  }
}

GateSet GateSet::standard() {
  return GateSet("standard", {{"H", 1, DenseUnitary(hadamard())},
                              {"T", 1, DenseUnitary(phase_gate(0.125))},
                              {"X", 1, DenseUnitary(pauli_x())},
                              {"CNOT", 2, DenseUnitary(cnot())}});
}

GateSet GateSet::involutive() {
  return GateSet("involutive", {{"X", 1, DenseUnitary(pauli_x())},
                                {"Z", 1, DenseUnitary(pauli_z())},
                                {"CZ", 2, DenseUnitary(cz())},
                                {"SWAP", 2, DenseUnitary(swap())}});
}

GateSet GateSet::phase_grid() {
  return GateSet("phase_grid", {{"X", 1, DenseUnitary(pauli_x())},
                                {"S", 1, DenseUnitary(phase_gate(0.25))},
                                {"T", 1, DenseUnitary(phase_gate(0.125))},
                                {"CNOT", 2, DenseUnitary(cnot())}});
}

GateSet GateSet::by_name(std::string_view name) {
  if (name == "standard") return standard();
  if (name == "involutive") return involutive();
  if (name == "phase_grid") return phase_grid();
  throw std::invalid_argument("unknown gate set '" + std::string(name) + "'");
}

int GateSet::index_of(std::string_view gate) const {
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (gates_[i].name == gate) return static_cast<int>(i);
  throw std::invalid_argument("gate '" + std::string(gate) + "' not in set '" + name_ + "'");
}

}  // namespace qrec
