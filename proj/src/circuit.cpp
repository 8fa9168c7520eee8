#include "qrec/circuit.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace qrec {

void validate(const GateSet& gs, const Circuit& c) {
  if (c.n < 1) throw DimensionError("circuit must act on at least one qubit");
  for (const auto& g : c.gates) {
    if (g.gate < 0 || g.gate >= gs.size()) throw std::invalid_argument("gate index out of range");
    if (static_cast<int>(g.targets.size()) != gs[g.gate].arity) {
      throw DimensionError("gate '" + gs[g.gate].name + "' given wrong number of targets");
    }
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      if (g.targets[i] < 0 || g.targets[i] >= c.n) throw DimensionError("gate target out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (g.targets[i] == g.targets[j]) throw DimensionError("gate targets must be distinct");
    }
  }
}

namespace {

std::vector<int> global_targets(const StateVector& state, std::string_view reg, const GateOp& g, int n) {
  const Register& r = state.layout().reg(reg);
  if (r.width != n) {
    throw DimensionError("circuit on " + std::to_string(n) + " qubits applied to register '" + r.name + "' of width " +
                         std::to_string(r.width));
  }
  std::vector<int> q(g.targets.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = r.offset + g.targets[i];
  return q;
}

}  // namespace

void app_inplace(StateVector& state, const GateSet& gs, const Circuit& c, std::string_view reg,
                 const BranchFilter& filter) {
  for (const auto& g : c.gates) {
    const auto q = global_targets(state, reg, g, c.n);
    state.apply_matrix(gs[g.gate].unitary.matrix(), q, filter);
  }
}

void app_inverse_inplace(StateVector& state, const GateSet& gs, const Circuit& c, std::string_view reg,
                         const BranchFilter& filter) {
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    const auto q = global_targets(state, reg, *it, c.n);
    state.apply_matrix(gs[it->gate].unitary.matrix().adjoint(), q, filter);
  }
}

Matrix build_matrix(const GateSet& gs, const Circuit& c) {
  validate(gs, c);
  const Eigen::Index dim = Eigen::Index{1} << c.n;
  Matrix out(dim, dim);
  RegisterLayout layout{{"x", c.n}};
  for (Eigen::Index col = 0; col < dim; ++col) {
    StateVector s = StateVector::basis(layout, static_cast<std::uint64_t>(col));
    app_inplace(s, gs, c, "x");
    out.col(col) = s.amplitudes();
  }
  return out;
}

CodeSpace::CodeSpace(GateSet gates, int n, int c) : gates_(std::move(gates)), n_(n), c_(c) {
  if (n < 1) throw DimensionError("code space needs n >= 1");
  if (c < 0) throw std::invalid_argument("maximum circuit length must be >= 0");
  for (int g = 0; g < gates_.size(); ++g) {
    const int k = gates_[g].arity;
    if (k > n) continue;
    std::vector<int> t(k, 0);
    // Enumerate ordered k-tuples of distinct qubits lexicographically.
    std::vector<std::vector<int>> tuples;
    std::function<void(int, std::uint64_t)> rec = [&](int pos, std::uint64_t used) {
      if (pos == k) {
        tuples.push_back(t);
        return;
      }
      for (int q = 0; q < n; ++q) {
        if (used >> q & 1) continue;
        t[pos] = q;
        rec(pos + 1, used | (std::uint64_t{1} << q));
      }
    };
    rec(0, 0);
    for (auto& tp : tuples) actions_.push_back({g, tp});
  }
  const std::uint64_t a = actions_.size();
  std::uint64_t power = 1;
  std::uint64_t total = 0;
  for (int len = 0; len <= c; ++len) {
    offsets_.push_back(total);
    if (total > std::numeric_limits<std::uint64_t>::max() - power) throw std::overflow_error("code space too large");
    total += power;
    if (len < c && a > 0) {
      if (power > std::numeric_limits<std::uint64_t>::max() / a) throw std::overflow_error("code space too large");
      power *= a;
    } else if (a == 0) {
      power = 0;
    }
  }
  size_ = total;
}

std::uint64_t CodeSpace::encode(const Circuit& circuit) const {
  if (circuit.n != n_) throw DimensionError("circuit width does not match code space");
  validate(gates_, circuit);
  const std::size_t len = circuit.gates.size();
  if (static_cast<int>(len) > c_) throw std::invalid_argument("circuit longer than the code space allows");
  std::uint64_t code = 0;
  std::uint64_t radix = 1;
  for (const auto& g : circuit.gates) {
    auto it = std::find(actions_.begin(), actions_.end(), g);
    if (it == actions_.end()) throw std::invalid_argument("gate placement not in code space");
    code += radix * static_cast<std::uint64_t>(it - actions_.begin());
    radix *= actions_.size();
  }
  return offsets_[len] + code;
}

Circuit CodeSpace::decode(std::uint64_t code) const {
  if (code >= size_) {
    throw std::out_of_range("code " + std::to_string(code) + " outside code space of size " + std::to_string(size_));
  }
  std::size_t len = 0;
  while (len + 1 < offsets_.size() && offsets_[len + 1] <= code) ++len;
  std::uint64_t rest = code - offsets_[len];
  Circuit c{n_, {}};
  for (std::size_t i = 0; i < len; ++i) {
    c.gates.push_back(actions_[rest % actions_.size()]);
    rest /= actions_.size();
  }
  return c;
}

StateVector app(const CodeSpace& space, std::uint64_t code, const StateVector& state, std::string_view target) {
  const Circuit c = space.decode(code);
  StateVector out = state;
  app_inplace(out, space.gate_set(), c, target);
  return out;
}

DenseUnitary build_unitary(const CodeSpace& space, std::uint64_t code) {
  return DenseUnitary(build_matrix(space.gate_set(), space.decode(code)));
}

}  // namespace qrec
