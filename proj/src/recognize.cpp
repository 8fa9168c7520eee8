#include "qrec/recognize.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace qrec {

std::string to_string(Backend b) { return b == Backend::Projector ? "projector" : "circuit"; }

Backend backend_from_string(std::string_view s) {
  if (s == "projector") return Backend::Projector;
  if (s == "circuit") return Backend::Circuit;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

void EigenQuery::validate() const {
  if (M < 1 || L != 16 * M || !is_power_of_two(static_cast<std::uint64_t>(L)))
    throw std::invalid_argument("eigen query needs L = 16M with L a power of two");
  if (omega_l < 0 || omega_l >= L) throw std::invalid_argument("candidate index outside [0, L)");
  if (v < 1 || h < 1) throw std::invalid_argument("eigen query needs v, h >= 1");
  if (!(accept_rho > 0.0 && accept_rho < 1.0) || !(sign_rho > 0.0 && sign_rho < 1.0))
    throw std::invalid_argument("thresholds must lie in (0, 1)");
}

bool readout_matches(const EigenQuery& q, std::uint64_t l) {
  return circular_distance(static_cast<double>(l) / q.L, q.omega()) <= 1.0 / q.L + 1e-12;
}

SpectralOracle SpectralOracle::from_matrix(const Matrix& u, int M, int L) {
  SpectralOracle o;
  o.dec = decompose(u);
  o.profile = make_profile(o.dec, M, L);
  return o;
}

SpectralOracle SpectralOracle::windowed(const Matrix& u, int L) {
  if (L < 1) throw std::invalid_argument("window needs L >= 1");
  SpectralOracle o;
  o.dec = decompose(u);
  o.window = 1.0 / L + 1e-12;
  return o;
}

Matrix SpectralOracle::eigenspace_basis(double omega) const {
  if (profile) return projector_basis(dec, omega, *profile);
  return projector_basis(dec, omega, window);
}

const SparsityProfile& SpectralOracle::require_profile() const {
  if (!profile) throw std::invalid_argument("spectral oracle has no sparsity profile");
  return *profile;
}

std::string ancilla_name(int j) { return "a" + std::to_string(j); }

RegisterLayout reflection_layout(int n, const EigenQuery& q) {
  RegisterLayout lay;
  lay.add("x", n);
  for (int j = 0; j < q.v; ++j) lay.add(ancilla_name(j), q.p());
  return lay;
}

namespace {

DevicePtr borrow(const Device& u) { return DevicePtr(&u, [](const Device*) {}); }

double weight_in(const Matrix& basis, const Vector& x) {
  if (basis.cols() == 0) return 0.0;
  return (basis.adjoint() * x).squaredNorm();
}

// ||P_E (x) 1|| ^2 summed over the ancilla branches; "x" is the low register.
double branch_weight(const Matrix& basis, const StateVector& s) {
  const Eigen::Index N = basis.rows();
  const auto& a = s.amplitudes();
  double w = 0.0;
  for (Eigen::Index off = 0; off < a.size(); off += N) w += weight_in(basis, a.segment(off, N));
  return w;
}

void apply_sign(StateVector& s, const EigenQuery& q, int n) {
  const std::uint64_t mask = static_cast<std::uint64_t>(q.L) - 1;
  const int p = q.p();
  const double need = q.sign_rho * q.v - 1e-12;
  s.apply_diagonal([&](std::uint64_t i) {
    int hits = 0;
    for (int j = 0; j < q.v; ++j)
      if (readout_matches(q, (i >> (n + j * p)) & mask)) ++hits;
    return hits >= need ? Complex(-1.0) : Complex(1.0);
  });
}

FrequencyTable table_for(const EigenQuery& q, const SpectralOracle* oracle, const FrequencyTable* table) {
  if (q.rest == RestKind::Inverse) return FrequencyTable{q.M, q.L, {}, Provenance::Oracle};
  if (table) return *table;
  if (oracle) return build_frequency_table(oracle->dec, oracle->require_profile());
  throw std::invalid_argument("turning restoration needs a frequency table");
}

void reflect_circuit(StateVector& s, const EigenQuery& q, const Device& u, const FrequencyTable& table) {
  const int n = u.qubits();
  for (int j = 0; j < q.v; ++j) rev_inplace(s, u, ancilla_name(j), "x", q.L);
  apply_sign(s, q, n);
  for (int j = 0; j < q.v; ++j) rest_inplace(s, u, ancilla_name(j), "x", table, q.L, q.rest);
}

struct RegisterRun {
  StateVector state;
  std::uint64_t t = 0;
  Vector a;
};

}  // namespace

void reflect_eigenspace_inplace(StateVector& s, const EigenQuery& q, const Device& u, const SpectralOracle* oracle,
                                const FrequencyTable* table) {
  q.validate();
  if (q.backend == Backend::Projector) {
    if (!oracle) throw std::invalid_argument("projector backend needs a spectral oracle");
    const Matrix b = oracle->eigenspace_basis(q.omega());
    const Eigen::Index N = oracle->dec.N;
    const Matrix r = Matrix::Identity(N, N) - 2.0 * b * b.adjoint();
    s.apply_matrix(r, "x");
    return;
  }
  reflect_circuit(s, q, u, table_for(q, oracle, table));
}

ConcentrateResult state_concentrate(const EigenQuery& q, const Device& u, const Rng& rng,
                                    const SpectralOracle* oracle) {
  q.validate();
  const int n = u.qubits();
  const Eigen::Index N = Eigen::Index{1} << n;
  std::optional<SpectralOracle> own;
  if (!oracle && q.backend == Backend::Projector) {
    own = SpectralOracle::from_matrix(u.matrix(), q.M, q.L);
    oracle = &*own;
  }
  if (oracle && oracle->dec.N != N) throw DimensionError("oracle dimension does not match the device");
  const Matrix basis = oracle ? oracle->eigenspace_basis(q.omega()) : Matrix(N, 0);
  const std::uint64_t B = q.stopping.bound(static_cast<std::uint64_t>(N));

  ConcentrateResult res;
  auto counter = std::make_shared<QueryCounter>();
  CountingDevice counted(borrow(u), counter);
  const FrequencyTable table = q.backend == Backend::Circuit ? table_for(q, oracle, nullptr) : FrequencyTable{};

  for (int k = 0; k < q.h; ++k) {
    Rng ar = rng.stream("genarg", static_cast<std::uint64_t>(k));
    Rng tr = rng.stream("time", static_cast<std::uint64_t>(k));
    const Vector a = haar_vector(ar, N);
    const std::uint64_t t = tr.uniform_int(0, B);
    res.times.push_back(t);
    if (q.backend == Backend::Projector) {
      const Vector xi = grover_iterate(a, ReflectionSpec::projector(basis), ReflectionSpec::along(a), t);
      res.overlaps.push_back(weight_in(basis, xi));
      res.registers.push_back(StateVector::from_amplitudes(RegisterLayout{{"x", n}}, xi));
    } else {
      StateVector s = StateVector::product(reflection_layout(n, q), {{"x", a}});
      for (std::uint64_t i = 0; i < t; ++i) {
        reflect_circuit(s, q, counted, table);
        s.reflect_about(a, "x");
      }
      res.overlaps.push_back(oracle ? branch_weight(basis, s) : std::numeric_limits<double>::quiet_NaN());
      res.registers.push_back(std::move(s));
    }
  }
  res.queries = q.backend == Backend::Projector ? recognition_queries(q, res.times) - q.h * (q.L - 1)
                                                : counter->total();
  return res;
}

std::uint64_t recognition_queries(const EigenQuery& q, const std::vector<std::uint64_t>& times) {
  const std::uint64_t rev = static_cast<std::uint64_t>(q.L - 1);
  std::uint64_t total = 0;
  for (auto t : times) total += t * 2 * static_cast<std::uint64_t>(q.v) * rev + rev;
  return total;
}

RecognitionReport recognize_eigenvalue(const EigenQuery& q, const Device& u, const Rng& rng,
                                       const SpectralOracle* oracle) {
  q.validate();
  std::optional<SpectralOracle> own;
  if (!oracle && q.backend == Backend::Projector) {
    own = SpectralOracle::from_matrix(u.matrix(), q.M, q.L);
    oracle = &*own;
  }
  ConcentrateResult conc = state_concentrate(q, u, rng, oracle);

  RecognitionReport rep;
  rep.query = q;
  rep.seed = rng.key();
  rep.queries = conc.queries;
  const int p = q.p();
  std::vector<std::vector<double>> rows;
  if (q.backend == Backend::Projector)
    for (const auto& sp : oracle->dec.spaces) {
      std::vector<double> row(static_cast<std::size_t>(q.L));
      for (int l = 0; l < q.L; ++l) row[static_cast<std::size_t>(l)] = std::norm(rev_amplitude(sp.omega, l, q.L));
      rows.push_back(std::move(row));
    }

  for (int k = 0; k < q.h; ++k) {
    RegisterRecord rec;
    rec.t = conc.times[static_cast<std::size_t>(k)];
    rec.overlap = conc.overlaps[static_cast<std::size_t>(k)];
    const StateVector& chi = conc.registers[static_cast<std::size_t>(k)];
    if (q.backend == Backend::Projector) {
      rec.readout_dist.assign(static_cast<std::size_t>(q.L), 0.0);
      for (std::size_t si = 0; si < oracle->dec.spaces.size(); ++si) {
        const double w = weight_in(oracle->dec.spaces[si].basis, chi.amplitudes());
        if (w < 1e-300) continue;
        const auto& row = rows[si];
        for (int l = 0; l < q.L; ++l) rec.readout_dist[static_cast<std::size_t>(l)] += w * row[static_cast<std::size_t>(l)];
      }
      rep.queries += static_cast<std::uint64_t>(q.L - 1);
    } else {
      // The ancillas are idle from here on, so the readout is the sum over
      // their (orthogonal) branches; negligible branches are skipped.
      const Eigen::Index N = Eigen::Index{1} << u.qubits();
      RegisterLayout lay;
      lay.add("x", u.qubits()).add("r", p);
      rec.readout_dist.assign(static_cast<std::size_t>(q.L), 0.0);
      const auto& amps = chi.amplitudes();
      for (Eigen::Index off = 0; off < amps.size(); off += N) {
        const Vector y = amps.segment(off, N);
        const double w = y.squaredNorm();
        if (w < 1e-9) continue;
        Vector z = Vector::Zero(static_cast<Eigen::Index>(lay.dim()));
        z.head(N) = y / std::sqrt(w);
        StateVector s = StateVector::from_amplitudes(lay, std::move(z));
        rev_inplace(s, u, "r", "x", q.L);
        const auto d = distribution(s, "r");
        for (int l = 0; l < q.L; ++l) rec.readout_dist[static_cast<std::size_t>(l)] += w * d[static_cast<std::size_t>(l)];
      }
      rep.queries += static_cast<std::uint64_t>(q.L - 1);
    }
    for (int l = 0; l < q.L; ++l)
      if (readout_matches(q, static_cast<std::uint64_t>(l))) rec.match_mass += rec.readout_dist[static_cast<std::size_t>(l)];
    Rng rr = rng.stream("readout", static_cast<std::uint64_t>(k));
    rec.readout = sample_index(rec.readout_dist, rr.uniform());
    rec.match = readout_matches(q, rec.readout);
    rep.matches += rec.match;
    rep.registers.push_back(std::move(rec));
  }
  rep.fraction = static_cast<double>(rep.matches) / q.h;
  rep.verdict = rep.fraction >= q.accept_rho - 1e-12;
  return rep;
}

}  // namespace qrec
