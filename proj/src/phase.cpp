#include "qrec/phase.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <mutex>

namespace qrec {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Oracle: return "oracle";
    case Provenance::Measured: return "measured";
    case Provenance::Injected: return "injected";
  }
  return "oracle";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "oracle") return Provenance::Oracle;
  if (s == "measured") return Provenance::Measured;
  if (s == "injected") return Provenance::Injected;
  throw std::invalid_argument("unknown provenance '" + std::string(s) + "'");
}

std::string to_string(RestKind k) { return k == RestKind::Inverse ? "inverse" : "turning"; }

RestKind rest_kind_from_string(std::string_view s) {
  if (s == "inverse") return RestKind::Inverse;
  if (s == "turning") return RestKind::Turning;
  throw std::invalid_argument("unknown rest kind '" + std::string(s) + "'");
}

const FrequencyEstimate& FrequencyTable::nearest(double x) const {
  if (entries.empty()) throw std::invalid_argument("frequency table is empty");
  const FrequencyEstimate* best = nullptr;
  double bd = 2.0;
  for (const auto& [l, e] : entries) {
    const double d = circular_distance(e.omega, x);
    if (d < bd) {
      bd = d;
      best = &e;
    }
  }
  return *best;
}

FrequencyTable build_frequency_table(const SpectralDecomposition& dec, const SparsityProfile& profile) {
  FrequencyTable t;
  t.M = profile.M;
  t.L = profile.L;
  t.provenance = Provenance::Oracle;
  for (const auto& g : profile.groups) {
    // circular weighted mean taken relative to the first member
    const double ref = g.frequencies.front();
    double acc = 0.0;
    int weight = 0;
    for (std::size_t i = 0; i < g.members.size(); ++i) {
      double off = wrap_unit(g.frequencies[i] - ref);
      if (off > 0.5) off -= 1.0;
      const int d = dec.spaces[g.members[i]].dim();
      acc += d * off;
      weight += d;
    }
    const double omega = wrap_unit(ref + acc / weight);
    const int h = static_cast<int>(std::lround(omega * t.L)) % t.L;
    t.entries[g.anchor] = {h, omega};
  }
  return t;
}

Matrix qft_matrix(int L) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Matrix>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[L];
  if (!slot) {
    Matrix f(L, L);
    const double norm = 1.0 / std::sqrt(static_cast<double>(L));
    for (int r = 0; r < L; ++r)
      for (int c = 0; c < L; ++c) f(r, c) = std::polar(norm, -kTwoPi * static_cast<double>((r * c) % L) / L);
    slot = std::make_shared<const Matrix>(std::move(f));
  }
  return *slot;
}

namespace {

void check_register(const StateVector& s, std::string_view reg, int L) {
  if ((std::uint64_t{1} << s.layout().reg(reg).width) != static_cast<std::uint64_t>(L)) {
    throw DimensionError("register '" + std::string(reg) + "' must have width log2(L)");
  }
}

}  // namespace

void qft_inplace(StateVector& s, std::string_view reg, int L) {
  check_register(s, reg, L);
  s.apply_matrix(qft_matrix(L), reg);
}

void qft_inverse_inplace(StateVector& s, std::string_view reg, int L) {
  check_register(s, reg, L);
  s.apply_matrix(qft_matrix(L).adjoint(), reg);
}

StateVector qft(const StateVector& s, std::string_view reg, int L) {
  StateVector out = s;
  qft_inplace(out, reg, L);
  return out;
}

void rev_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L,
                 const RevOptions& opt) {
  check_register(s, ancilla, L);
  if (opt.hadamard_first) {
    const double h = 1.0 / std::sqrt(2.0);
    Matrix had(2, 2);
    had << h, h, h, -h;
    for (int q : s.layout().qubits(ancilla)) {
      const int one[1] = {q};
      s.apply_matrix(had, one);
    }
  } else {
    qft_inplace(s, ancilla, L);
  }
  u_seq_inplace(s, u, ancilla, target, L);
  qft_inplace(s, ancilla, L);
}

StateVector rev(const StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L,
                const RevOptions& opt) {
  StateVector out = s;
  rev_inplace(out, u, ancilla, target, L, opt);
  return out;
}

void rev_inverse_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L) {
  qft_inverse_inplace(s, ancilla, L);
  u_seq_inverse_inplace(s, u, ancilla, target, L);
  qft_inverse_inplace(s, ancilla, L);
}

Complex rev_amplitude(double omega, int l, int L) {
  const double delta = omega - static_cast<double>(l) / L;
  const double den = std::sin(std::numbers::pi * delta);
  const double x = std::fabs(den);
  if (x < 1e-12) return 1.0;  // delta is an integer: every term equals 1
  return phase(0.5 * (L - 1) * delta) * (std::sin(std::numbers::pi * L * delta) / (L * den));
}

std::vector<double> rev_distribution(double omega, int L) {
  std::vector<double> p(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) p[l] = std::norm(rev_amplitude(omega, l, L));
  return p;
}

void turning_inplace(StateVector& s, const FrequencyTable& table, std::string_view ancilla, int L,
                     const TurningOptions& opt) {
  check_register(s, ancilla, L);
  if (table.entries.empty()) throw std::invalid_argument("turning: frequency table is empty");
  const double m = opt.multiplier < 0 ? static_cast<double>(L - 1) : opt.multiplier;
  const Register& a = s.layout().reg(ancilla);
  const std::uint64_t mask = static_cast<std::uint64_t>(L) - 1;

  // Per ancilla value: which table entry Enh resolves to, and D~'s phase.
  std::vector<int> slot(static_cast<std::size_t>(L));
  std::vector<double> estimates;
  for (const auto& [l, e] : table.entries) estimates.push_back(e.omega);
  for (int l = 0; l < L; ++l) {
    const double x = static_cast<double>(l) / L;
    const double w = table.nearest(x).omega;
    slot[l] = static_cast<int>(std::find(estimates.begin(), estimates.end(), w) - estimates.begin());
  }
  auto phase_for = [&](int l, int k) { return phase(-m * (estimates[k] - static_cast<double>(l) / L)); };

  if (opt.scratch.empty()) {
    s.apply_diagonal([&](std::uint64_t i) {
      const int l = static_cast<int>((i >> a.offset) & mask);
      return phase_for(l, slot[l]);
    });
    return;
  }
  const Register& sc = s.layout().reg(opt.scratch);
  if ((std::uint64_t{1} << sc.width) < estimates.size()) throw DimensionError("scratch register too narrow for table");
  const std::uint64_t smask = (std::uint64_t{1} << sc.width) - 1;
  // Enh: scratch ^= slot(l)
  auto enh = [&](std::uint64_t i) {
    const int l = static_cast<int>((i >> a.offset) & mask);
    return i ^ (static_cast<std::uint64_t>(slot[l]) << sc.offset);
  };
  s.apply_permutation(enh);
  s.apply_diagonal([&](std::uint64_t i) {
    const int l = static_cast<int>((i >> a.offset) & mask);
    const auto k = static_cast<std::size_t>((i >> sc.offset) & smask);
    if (k >= estimates.size()) return Complex(1.0);
    return phase_for(l, static_cast<int>(k));
  });
  s.apply_permutation(enh);
}

StateVector turning(const StateVector& s, const FrequencyTable& table, std::string_view ancilla, int L,
                    const TurningOptions& opt) {
  StateVector out = s;
  turning_inplace(out, table, ancilla, L, opt);
  return out;
}

void rest_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target,
                  const FrequencyTable& table, int L, RestKind kind, const TurningOptions& opt) {
  if (kind == RestKind::Inverse) {
    rev_inverse_inplace(s, u, ancilla, target, L);
    return;
  }
  turning_inplace(s, table, ancilla, L, opt);
  rev_inplace(s, u, ancilla, target, L);
}

StateVector rest(const StateVector& s, const Device& u, std::string_view ancilla, std::string_view target,
                 const FrequencyTable& table, int L, RestKind kind, const TurningOptions& opt) {
  StateVector out = s;
  rest_inplace(out, u, ancilla, target, table, L, kind, opt);
  return out;
}

double restoration_residual(const Vector& chi, const Device& u, const FrequencyTable& table, int L, RestKind kind,
                            const TurningOptions& opt) {
  RegisterLayout lay;
  lay.add("x", u.qubits()).add("f", log2_exact(static_cast<std::uint64_t>(L)));
  if (!opt.scratch.empty()) lay.add(opt.scratch, std::max(1, log2_exact(std::bit_ceil(table.entries.size() + 1))));
  const StateVector start = StateVector::product(lay, {{"x", chi}});
  StateVector s = start;
  rev_inplace(s, u, "f", "x", L);
  rest_inplace(s, u, "f", "x", table, L, kind, opt);
  return (s.amplitudes() - start.amplitudes()).norm();
}

}  // namespace qrec
