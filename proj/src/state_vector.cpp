#include "qrec/state_vector.hpp"

#include <cstdio>
#include <sstream>

namespace qrec {

namespace {

template <int D>
void kernel(Complex* a, std::uint64_t n, std::uint64_t mask, const std::uint64_t* offs, const Complex* m,
            const BranchFilter& filter) {
  Complex in[D];
  for (std::uint64_t base = 0; base < n; base = ((base | mask) + 1) & ~mask) {
    if (filter && !filter(base)) continue;
    for (int j = 0; j < D; ++j) in[j] = a[base | offs[j]];
    for (int r = 0; r < D; ++r) {
      double re = 0.0, im = 0.0;
      for (int c = 0; c < D; ++c) {
        const Complex& x = m[r * D + c];
        re += x.real() * in[c].real() - x.imag() * in[c].imag();
        im += x.real() * in[c].imag() + x.imag() * in[c].real();
      }
      a[base | offs[r]] = Complex(re, im);
    }
  }
}

}  // namespace

StateVector::StateVector(RegisterLayout layout)
    : layout_(std::move(layout)), amps_(Vector::Zero(static_cast<Eigen::Index>(layout_.dim()))) {
  amps_[0] = 1.0;
}

StateVector::StateVector(RegisterLayout layout, Vector amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {}

StateVector StateVector::basis(RegisterLayout layout, std::uint64_t index) {
  if (index >= layout.dim()) throw DimensionError("basis index out of range");
  StateVector s(std::move(layout));
  s.amps_[0] = 0.0;
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector StateVector::basis(RegisterLayout layout,
                               const std::map<std::string, std::uint64_t>& values) {
  const std::uint64_t index = layout.compose(values);
  return basis(std::move(layout), index);
}

StateVector StateVector::from_amplitudes(RegisterLayout layout, Vector amps) {
  if (static_cast<std::uint64_t>(amps.size()) != layout.dim()) {
    throw DimensionError("amplitude count " + std::to_string(amps.size()) + " does not match layout dimension " +
                         std::to_string(layout.dim()));
  }
  StateVector s(std::move(layout), std::move(amps));
  s.check_normalized("from_amplitudes");
  return s;
}

StateVector StateVector::product(RegisterLayout layout, const std::map<std::string, Vector>& parts) {
  Vector amps = Vector::Ones(1);
  // Kronecker product from the most significant register down.
  const auto& regs = layout.registers();
  for (auto it = regs.rbegin(); it != regs.rend(); ++it) {
    const Eigen::Index d = Eigen::Index{1} << it->width;
    Vector part = Vector::Zero(d);
    if (auto f = parts.find(it->name); f != parts.end()) {
      if (f->second.size() != d) throw DimensionError("vector for register '" + it->name + "' has wrong size");
      part = f->second;
    } else {
      part[0] = 1.0;
    }
    Vector next(amps.size() * d);
    for (Eigen::Index hi = 0; hi < amps.size(); ++hi)
      for (Eigen::Index lo = 0; lo < d; ++lo) next[hi * d + lo] = amps[hi] * part[lo];
    amps = std::move(next);
  }
  for (const auto& [name, v] : parts) layout.reg(name);  // reject unknown names
  StateVector s(std::move(layout), std::move(amps));
  s.check_normalized("product");
  return s;
}

Complex StateVector::inner(const StateVector& other) const {
  if (!(layout_ == other.layout_)) throw DimensionError("inner product of states with different layouts");
  return amps_.dot(other.amps_);
}

void StateVector::apply_matrix(const Matrix& u, std::span<const int> qubits, const BranchFilter& filter) {
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index d = Eigen::Index{1} << k;
  if (u.rows() != d || u.cols() != d) {
    throw DimensionError("matrix of size " + std::to_string(u.rows()) + " applied to " + std::to_string(k) +
                         " qubits");
  }
  std::uint64_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= layout_.width()) throw DimensionError("qubit index out of range");
    if (mask >> q & 1) throw DimensionError("repeated qubit in target list");
    mask |= std::uint64_t{1} << q;
  }
  std::vector<std::uint64_t> offs(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    std::uint64_t o = 0;
    for (int b = 0; b < k; ++b)
      if (j >> b & 1) o |= std::uint64_t{1} << qubits[b];
    offs[static_cast<std::size_t>(j)] = o;
  }
  std::vector<Complex> m(static_cast<std::size_t>(d * d));
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m[static_cast<std::size_t>(r * d + c)] = u(r, c);
  switch (d) {
    case 2: return kernel<2>(amps_.data(), layout_.dim(), mask, offs.data(), m.data(), filter);
    case 4: return kernel<4>(amps_.data(), layout_.dim(), mask, offs.data(), m.data(), filter);
    case 8: return kernel<8>(amps_.data(), layout_.dim(), mask, offs.data(), m.data(), filter);
    default: break;
  }
  std::vector<Complex> in(static_cast<std::size_t>(d));
  Complex* a = amps_.data();
  const std::uint64_t n = layout_.dim();
  // walk only the indices with every target bit clear
  for (std::uint64_t base = 0; base < n; base = ((base | mask) + 1) & ~mask) {
    if (filter && !filter(base)) continue;
    for (Eigen::Index j = 0; j < d; ++j) in[j] = a[base | offs[j]];
    const Complex* row = m.data();
    for (Eigen::Index r = 0; r < d; ++r, row += d) {
      double re = 0.0, im = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        re += row[c].real() * in[c].real() - row[c].imag() * in[c].imag();
        im += row[c].real() * in[c].imag() + row[c].imag() * in[c].real();
      }
      a[base | offs[r]] = Complex(re, im);
    }
  }
}

void StateVector::apply_matrix(const Matrix& u, std::string_view reg, const BranchFilter& filter) {
  const auto q = layout_.qubits(reg);
  apply_matrix(u, q, filter);
}

void StateVector::apply_diagonal(const std::function<Complex(std::uint64_t)>& phase) {
  const std::uint64_t n = layout_.dim();
  for (std::uint64_t i = 0; i < n; ++i) amps_[static_cast<Eigen::Index>(i)] *= phase(i);
}

void StateVector::apply_permutation(const std::function<std::uint64_t(std::uint64_t)>& perm) {
  const std::uint64_t n = layout_.dim();
  Vector out = Vector::Zero(amps_.size());
  std::vector<bool> hit(n, false);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = perm(i);
    if (j >= n || hit[j]) throw std::invalid_argument("apply_permutation: map is not a bijection");
    hit[j] = true;
    out[static_cast<Eigen::Index>(j)] = amps_[static_cast<Eigen::Index>(i)];
  }
  amps_ = std::move(out);
}

void StateVector::reflect_about(const Vector& v, std::string_view reg) {
  const Register& r = layout_.reg(reg);
  const Eigen::Index d = Eigen::Index{1} << r.width;
  if (v.size() != d) throw DimensionError("reflection vector has wrong size");
  const std::uint64_t mask = (static_cast<std::uint64_t>(d) - 1) << r.offset;
  const std::uint64_t n = layout_.dim();
  for (std::uint64_t base = 0; base < n; ++base) {
    if (base & mask) continue;
    Complex ov = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
      ov += std::conj(v[j]) * amps_[static_cast<Eigen::Index>(base | (std::uint64_t(j) << r.offset))];
    if (ov == Complex(0.0)) continue;
    for (Eigen::Index j = 0; j < d; ++j)
      amps_[static_cast<Eigen::Index>(base | (std::uint64_t(j) << r.offset))] -= 2.0 * ov * v[j];
  }
}

void StateVector::check_normalized(const char* where) const {
  const double nrm = norm();
  if (std::fabs(nrm - 1.0) > kNormTolerance) {
    throw std::domain_error(std::string(where) + ": state norm " + std::to_string(nrm) + " is not 1");
  }
}

std::string StateVector::to_text() const {
  std::ostringstream os;
  char buf[96];
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) < 1e-12) continue;
    std::snprintf(buf, sizeof buf, "%lld %.12g %.12g\n", static_cast<long long>(i), amps_[i].real(),
                  amps_[i].imag());
    os << buf;
  }
  return os.str();
}

StateVector apply(const StateVector& state, const DenseUnitary& u, std::string_view target) {
  if (u.qubits() != state.layout().reg(target).width) {
    throw DimensionError("unitary of " + std::to_string(u.qubits()) + " qubits applied to register '" +
                         std::string(target) + "'");
  }
  StateVector out = state;
  out.apply_matrix(u.matrix(), target);
  return out;
}

StateVector apply_controlled(const StateVector& state, const DenseUnitary& u, std::string_view control,
                             std::string_view target) {
  const Register& c = state.layout().reg(control);
  if (c.width != 1) throw DimensionError("control register must have width 1");
  if (u.qubits() != state.layout().reg(target).width) throw DimensionError("controlled unitary width mismatch");
  StateVector out = state;
  const int bit = c.offset;
  out.apply_matrix(u.matrix(), target, [bit](std::uint64_t i) { return (i >> bit & 1) != 0; });
  return out;
}

std::vector<double> distribution(const StateVector& state, std::string_view reg) {
  const Register& r = state.layout().reg(reg);
  std::vector<double> p(std::size_t{1} << r.width, 0.0);
  const auto& a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) p[(static_cast<std::uint64_t>(i) >> r.offset) & (p.size() - 1)] += std::norm(a[i]);
  return p;
}

std::uint64_t sample_index(const std::vector<double>& probs, double u) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double target = u * total;
  double acc = 0.0;
  std::uint64_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last = i;
    acc += probs[i];
    if (target < acc) return i;
  }
  return last;
}

MeasureResult measure(const StateVector& state, std::string_view reg, Rng& rng) {
  const auto probs = distribution(state, reg);
  const std::uint64_t outcome = sample_index(probs, rng.uniform());
  const Register& r = state.layout().reg(reg);
  const std::uint64_t mask = (probs.size() - 1);
  Vector amps = state.amplitudes();
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    if (((static_cast<std::uint64_t>(i) >> r.offset) & mask) != outcome) amps[i] = 0.0;
  amps /= std::sqrt(probs[outcome]);
  return {outcome, StateVector::from_amplitudes(state.layout(), std::move(amps))};
}

}  // namespace qrec
