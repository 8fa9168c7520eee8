#include "qrec/thermo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrec {

HamiltonianSpec HamiltonianSpec::from_matrix(Matrix h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionError("hamiltonian must be square and non-empty");
  if (!is_power_of_two(static_cast<std::uint64_t>(h.rows()))) throw DimensionError("hamiltonian dimension is not a power of two");
  if ((h - h.adjoint()).norm() > tol) throw std::invalid_argument("hamiltonian is not hermitian");
  HamiltonianSpec s;
  s.matrix_ = std::move(h);
  return s;
}

HamiltonianSpec HamiltonianSpec::from_levels(std::vector<Level> levels) {
  if (levels.empty()) throw std::invalid_argument("empty level list");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].degeneracy < 1) throw std::invalid_argument("level degeneracy must be >= 1");
    if (i > 0 && !(levels[i].energy > levels[i - 1].energy)) throw std::invalid_argument("levels must be strictly increasing");
    total += static_cast<std::uint64_t>(levels[i].degeneracy);
  }
  if (!is_power_of_two(total)) throw DimensionError("total degeneracy " + std::to_string(total) + " is not a power of two");
  HamiltonianSpec s;
  s.levels_ = std::move(levels);
  return s;
}

int HamiltonianSpec::dim() const {
  if (matrix_) return static_cast<int>(matrix_->rows());
  int n = 0;
  for (const auto& l : levels_) n += l.degeneracy;
  return n;
}

Matrix HamiltonianSpec::to_matrix(Rng& rng) const {
  if (matrix_) return *matrix_;
  const int n = dim();
  Eigen::VectorXd e(n);
  int k = 0;
  for (const auto& l : levels_)
    for (int j = 0; j < l.degeneracy; ++j) e[k++] = l.energy;
  const Matrix w = haar_unitary(rng, n);
  Matrix h = w * e.cast<Complex>().asDiagonal() * w.adjoint();
  return 0.5 * (h + h.adjoint());
}

std::vector<double> HamiltonianSpec::eigenvalues() const {
  std::vector<double> out;
  if (matrix_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(*matrix_, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
    return out;
  }
  for (const auto& l : levels_)
    for (int j = 0; j < l.degeneracy; ++j) out.push_back(l.energy);
  return out;
}

double FrequencyMap::energy(double omega) const {
  double w = wrap_unit(omega);
  if (w >= (1.0 + span) / 2.0) w -= 1.0;
  return top - w * width;
}

Rescaled rescale_to_unitary(const Matrix& h, double span) {
  if (!(span > 0.0 && span < 1.0)) throw std::invalid_argument("span must lie in (0, 1)");
  if (h.rows() != h.cols()) throw DimensionError("hamiltonian must be square");
  if ((h - h.adjoint()).norm() > 1e-8) throw std::invalid_argument("hamiltonian is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd& e = es.eigenvalues();
  const double lo = e.minCoeff(), hi = e.maxCoeff();
  Rescaled r;
  r.map.top = hi;
  r.map.span = span;
  r.single_level = hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi));
  r.map.width = r.single_level ? 1.0 : (hi - lo) / span;
  Eigen::VectorXcd ph(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) ph[i] = phase(r.map.frequency(e[i]));
  r.u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  return r;
}

ThermoResult thermo_functions(std::vector<Level> levels, double kbt, std::size_t keep) {
  if (levels.empty()) throw std::invalid_argument("thermo_functions: empty level list");
  if (!(kbt > 0.0)) throw std::invalid_argument("thermo_functions: k_B T must be positive");
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });
  ThermoResult r;
  r.kbt = kbt;
  const std::size_t n = keep == 0 ? levels.size() : std::min(keep, levels.size());
  r.levels.assign(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n));
  for (const auto& l : r.levels) r.Q += l.degeneracy * std::exp(-l.energy / kbt);
  const double logq = std::log(r.Q);
  for (const auto& l : r.levels) {
    const double lp = -l.energy / kbt - logq;  // ln(e^{-E/kT}/Q)
    const double p = std::exp(lp);
    r.mean_energy += l.energy * l.degeneracy * p;
    r.entropy -= l.degeneracy * p * lp;
  }
  if (n < levels.size()) r.truncation_bound = levels[n].degeneracy * std::exp(-levels[n].energy / kbt) / r.Q;
  return r;
}

std::vector<RecognitionReport> find_anchor_frequencies(const Device& u, const SpectralOracle& oracle,
                                                       const ThermoOptions& opt, const Rng& rng) {
  std::vector<RecognitionReport> out;
  for (int l = 0; l < opt.M; ++l) {
    EigenQuery q;
    q.M = opt.M;
    q.L = 16 * opt.M;
    q.omega_l = l * 16;
    q.h = opt.h;
    q.v = opt.v;
    auto rep = recognize_eigenvalue(q, u, rng.stream("anchor", static_cast<std::uint64_t>(l)), &oracle);
    if (rep.verdict) out.push_back(std::move(rep));
  }
  return out;
}

CountResult degeneracy(const SpectralOracle& oracle, double omega, double eps, const Rng& rng,
                       const CountOptions& opt) {
  const Matrix basis = oracle.eigenspace_basis(omega);
  Rng r = rng.stream("degeneracy");
  return count_rotation_time(basis, eps, r, opt);
}

namespace {

// mean of the matched readouts, as offsets from the candidate
double refine_frequency(const RecognitionReport& rep) {
  const int L = rep.query.L;
  double acc = 0.0;
  int n = 0;
  for (const auto& reg : rep.registers) {
    if (!reg.match) continue;
    double d = static_cast<double>(reg.readout) / L - rep.query.omega();
    d -= std::round(d);
    acc += d;
    ++n;
  }
  return wrap_unit(rep.query.omega() + (n ? acc / n : 0.0));
}

}  // namespace

ThermoReport run_thermo(const HamiltonianSpec& h, const std::vector<double>& kbts, const ThermoOptions& opt,
                        const Rng& rng) {
  if (kbts.empty()) throw std::invalid_argument("run_thermo: no temperatures");
  Rng hr = rng.stream("hamiltonian");
  const Matrix hm = h.to_matrix(hr);
  const Rescaled rs = rescale_to_unitary(hm, opt.span);
  ThermoReport rep;
  rep.map = rs.map;
  if (rs.single_level) {
    RecognizedLevel lv;
    lv.energy = rs.map.top;
    lv.degeneracy = static_cast<int>(hm.rows());
    rep.levels.push_back(lv);
  } else {
    const int L = 16 * opt.M;
    const SpectralOracle oracle = SpectralOracle::from_matrix(rs.u, opt.M, L);
    auto dev = make_matrix_device(rs.u);
    for (const auto& a : find_anchor_frequencies(*dev, oracle, opt, rng)) {
      RecognizedLevel lv;
      lv.anchor = a.query.omega_l / 16;
      lv.omega = refine_frequency(a);
      lv.energy = rs.map.energy(lv.omega);
      lv.fraction = a.fraction;
      const CountResult c =
          degeneracy(oracle, a.query.omega(), opt.eps, rng.stream("count", static_cast<std::uint64_t>(lv.anchor)),
                     opt.counting);
      lv.degeneracy = c.d_hat;
      lv.bracket_lo = c.bracket_lo;
      lv.bracket_hi = c.bracket_hi;
      lv.queries = a.queries + c.reflections * 2 * static_cast<std::uint64_t>(opt.v) * static_cast<std::uint64_t>(L - 1);
      rep.queries += lv.queries;
      if (lv.degeneracy > 0) rep.levels.push_back(lv);
    }
    std::sort(rep.levels.begin(), rep.levels.end(),
              [](const RecognizedLevel& x, const RecognizedLevel& y) { return x.energy < y.energy; });
  }
  if (rep.levels.empty()) throw std::runtime_error("run_thermo: no level was recognized");
  for (double kbt : kbts) {
    std::vector<Level> all;
    for (const auto& l : rep.levels) all.push_back({l.energy, l.degeneracy});
    auto logw = [kbt](const Level& l) { return std::log(double(l.degeneracy)) - l.energy / kbt; };
    double lead = -INFINITY;
    for (const auto& l : all) lead = std::max(lead, logw(l));
    // levels whose Boltzmann weight is negligible next to the leading one go last
    std::vector<Level> kept;
    double omitted = 0.0;
    for (const auto& l : all) {
      const bool keep = logw(l) >= lead + std::log(opt.weight_cutoff) && (!opt.max_levels || kept.size() < opt.max_levels);
      if (keep) kept.push_back(l);
      else omitted = std::max(omitted, std::exp(logw(l)));
    }
    ThermoResult r = thermo_functions(kept, kbt);
    r.truncation_bound = omitted / r.Q;
    rep.results.push_back(std::move(r));
  }
  return rep;
}

}  // namespace qrec
