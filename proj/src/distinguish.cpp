#include "qrec/distinguish.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "qrec/phase.hpp"

namespace qrec {

void DistinguishOptions::validate() const {
  if (M < 2 || L < 16 * M || !is_power_of_two(static_cast<std::uint64_t>(L)))
    throw std::invalid_argument("distinguish needs M >= 2 and L >= 16M, a power of two");
  if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("d must lie in (0, 1]");
  if (v < 1 || check_copies < 1 || closed_registers < 1 || closed_copies < 1 || gen_registers < 1 || gap_retries < 0)
    throw std::invalid_argument("distinguish register counts must be positive");
  for (double r : {check_weight, almost_orthogonal, closed_rho, sig_rho, change_rho, narrow_far, ort_far})
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("distinguish thresholds must lie in (0, 1]");
  if (!(gap_lo < gap_hi)) throw std::invalid_argument("empty forbidden gap");
}

std::uint64_t DistinguishOptions::turn_bound() const { return static_cast<std::uint64_t>(std::ceil(2.0 / d - 1e-12)); }

namespace {

Matrix orth(const Matrix& m, double tol) {
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix pick(const Matrix& cols, const std::vector<bool>& keep) {
  Matrix out(cols.rows(), std::count(keep.begin(), keep.end(), true));
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < cols.cols(); ++i)
    if (keep[static_cast<std::size_t>(i)]) out.col(c++) = cols.col(i);
  return out;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix m(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  m << a, b;
  return m;
}

Vector reflect(const Matrix& basis, const Vector& a) {
  if (basis.cols() == 0) return a;
  const Vector p = basis * (basis.adjoint() * a);
  return a - 2.0 * p;
}

double weight(const Matrix& basis, const Vector& a) {
  if (basis.cols() == 0) return 0.0;
  return (basis.adjoint() * a).squaredNorm() / a.squaredNorm();
}

// Fejer mass of a frequency whose readouts do not round to omega on the 1/M grid.
double far_mass(double freq, double omega, int M, int L) {
  double m = 0.0;
  for (int l = 0; l < L; ++l)
    if (circular_distance(static_cast<double>(l) / L, omega) >= 0.5 / M - 1e-12) m += std::norm(rev_amplitude(freq, l, L));
  return m;
}

}  // namespace

bool Subspaces::distinguishable(double d) const {
  if (coincident) return false;
  if ((dim_u() == 0) != (dim_v() == 0)) return true;
  return std::max(mu_u, mu_v) >= d - 1e-9;
}

Matrix Subspaces::u_far(double far, bool strict) const {
  std::vector<bool> keep;
  for (double c : u_cos) keep.push_back(strict ? 1 - c * c > far : 1 - c * c >= far - 1e-12);
  return pick(u_principal, keep);
}

Matrix Subspaces::v_far(double far, bool strict) const {
  std::vector<bool> keep;
  for (double c : v_cos) keep.push_back(strict ? 1 - c * c > far : 1 - c * c >= far - 1e-12);
  return pick(v_principal, keep);
}

Subspaces analyze_subspaces(const Matrix& bu, const Matrix& bv, double tol) {
  if (bu.rows() != bv.rows()) throw DimensionError("subspaces live in different spaces");
  Subspaces s;
  s.u = bu;
  s.v = bv;
  const Eigen::Index a = bu.cols(), b = bv.cols(), k = std::min(a, b);
  s.u_principal = bu;
  s.v_principal = bv;
  s.u_cos.assign(static_cast<std::size_t>(a), 0.0);
  s.v_cos.assign(static_cast<std::size_t>(b), 0.0);
  if (k > 0) {
    const Matrix c = bu.adjoint() * bv;
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    s.u_principal = bu * svd.matrixU();
    s.v_principal = bv * svd.matrixV();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double sv = std::min(1.0, svd.singularValues()[i]);
      s.u_cos[static_cast<std::size_t>(i)] = sv;
      s.v_cos[static_cast<std::size_t>(i)] = sv;
    }
  }
  std::vector<bool> common(static_cast<std::size_t>(a)), pu(static_cast<std::size_t>(a)), pv(static_cast<std::size_t>(b));
  for (Eigen::Index i = 0; i < a; ++i) {
    common[static_cast<std::size_t>(i)] = s.u_cos[static_cast<std::size_t>(i)] > 1 - tol;
    pu[static_cast<std::size_t>(i)] = !common[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < b; ++i) pv[static_cast<std::size_t>(i)] = s.v_cos[static_cast<std::size_t>(i)] <= 1 - tol;
  s.common = pick(s.u_principal, common);
  s.prime = orth(hcat(pick(s.u_principal, pu), pick(s.v_principal, pv)), 1e-8);

  auto mu = [](Eigen::Index self, Eigen::Index other, const std::vector<double>& cos) {
    if (self == 0) return 0.0;
    if (self > other) return 1.0;
    const double c = *std::min_element(cos.begin(), cos.end());
    return std::sqrt(std::max(0.0, 1 - c * c));
  };
  s.mu_u = mu(a, b, s.u_cos);
  s.mu_v = mu(b, a, s.v_cos);
  s.coincident = a == b && s.common.cols() == a;
  return s;
}

Matrix cell_basis(const SpectralDecomposition& dec, double omega, int M) {
  return projector_basis(dec, omega, 0.5 / M - 1e-12);
}

DistinguishCase::DistinguishCase(DevicePtr u, DevicePtr v, double omega, DistinguishOptions opt)
    : omega_(omega), opt_(std::move(opt)) {
  opt_.validate();
  if (!u || !v) throw std::invalid_argument("distinguish needs two devices");
  if (u->qubits() != v->qubits()) throw DimensionError("devices act on different widths");
  if (!(omega >= 0.0 && omega < 1.0)) throw std::invalid_argument("omega must lie in [0, 1)");
  N_ = Eigen::Index{1} << u->qubits();
  cu_ = std::make_shared<QueryCounter>();
  cv_ = std::make_shared<QueryCounter>();
  du_ = decompose(u->matrix());
  dv_ = decompose(v->matrix());
  bu_ = std::make_unique<BlackBox>(std::move(u), cu_, "U");
  bv_ = std::make_unique<BlackBox>(std::move(v), cv_, "V");
  for (const auto& s : du_.spaces) close_mass_u_.push_back(1.0 - far_mass(s.omega, omega_, opt_.M, opt_.L));
  for (const auto& s : dv_.spaces) close_mass_v_.push_back(1.0 - far_mass(s.omega, omega_, opt_.M, opt_.L));
  sub_ = analyze_subspaces(cell_basis(du_, omega_, opt_.M), cell_basis(dv_, omega_, opt_.M));
  if (!sub_.coincident && !sub_.distinguishable(opt_.d))
    throw PromiseViolation("eigenspaces are neither coincident nor d-distinguishable (mu_U = " +
                           std::to_string(sub_.mu_u) + ", mu_V = " + std::to_string(sub_.mu_v) + ")");
}

double DistinguishCase::close(const SpectralDecomposition& dec, const std::vector<double>& mass, const Vector& a) {
  double p = 0.0;
  for (std::size_t i = 0; i < dec.spaces.size(); ++i) p += weight(dec.spaces[i].basis, a) * mass[i];
  return std::clamp(p, 0.0, 1.0);
}

std::uint64_t DistinguishCase::reflection_cost() const { return 2 * static_cast<std::uint64_t>(opt_.v) * rev_cost(); }

bool AncillaFlags::clean() const {
  if (alpha_u || alpha_v || alpha_ort || same_dim || u_gt_v || u_lt_v || ort_u_gt_v || ort_u_lt_v) return false;
  return std::none_of(beta.begin(), beta.end(), [](int b) { return b != 0; });
}

Vector turn(const Vector& a, const DistinguishCase& c, std::uint64_t t) {
  Vector x = a;
  for (std::uint64_t i = 0; i < t; ++i) {
    x = reflect(c.subspaces().v, x);
    x = reflect(c.subspaces().u, x);
  }
  c.charge_u(t * c.reflection_cost());
  c.charge_v(t * c.reflection_cost());
  return x;
}

void check(const Vector& a, const DistinguishCase& c, AncillaFlags& f) {
  const auto& o = c.options();
  f.alpha_u ^= weight(c.subspaces().u, a) >= o.check_weight - 1e-12;
  f.alpha_v ^= weight(c.subspaces().v, a) >= o.check_weight - 1e-12;
  const std::uint64_t cost = 2 * static_cast<std::uint64_t>(o.check_copies) * c.rev_cost();
  c.charge_u(cost);
  c.charge_v(cost);
}

namespace {

Vector ort_step(const Vector& a, const DistinguishCase& c, AncillaFlags& f, bool sign) {
  if (f.alpha_u == f.alpha_v) return a;
  const auto& o = c.options();
  const Matrix& target = f.alpha_u ? c.subspaces().v : c.subspaces().u;
  const std::uint64_t cost = 2 * static_cast<std::uint64_t>(o.check_copies) * c.rev_cost();
  f.alpha_u ? c.charge_v(cost) : c.charge_u(cost);
  if (std::sqrt(weight(target, a)) >= o.almost_orthogonal) return a;
  f.alpha_ort ^= 1;
  return sign ? Vector(-a) : a;
}

}  // namespace

Vector dist_ort(const Vector& a, const DistinguishCase& c, AncillaFlags& f) { return ort_step(a, c, f, true); }

Vector dist_ort_minus(const Vector& a, const DistinguishCase& c, AncillaFlags& f) { return ort_step(a, c, f, false); }

Vector dist_closed(const Vector& a, const DistinguishCase& c, const AncillaFlags& f, const Rng& rng,
                   ClosedEvidence* ev) {
  if (!(f.alpha_u || f.alpha_v) || f.alpha_ort) return a;
  const auto& o = c.options();
  const std::uint64_t T = o.turn_bound();
  const int K = o.closed_copies;
  int ones = 0;
  for (int j = 0; j < o.closed_registers; ++j) {
    Rng jr = rng.stream("closed", static_cast<std::uint64_t>(j));
    Rng tr = jr.stream("time");
    Rng rr = jr.stream("readout");
    const std::uint64_t t = tr.uniform_int(0, T);
    const Vector aj = turn(a, c, t);
    const double p = c.close_u(aj);
    int close = 0;
    for (int k = 0; k < K; ++k) close += rr.uniform() < p;
    const bool beta = f.alpha_u ? (K - close) >= o.sig_rho * K - 1e-12 : (f.alpha_v && close >= o.sig_rho * K - 1e-12);
    ones += beta;
    // Rev and Rest copies, then the inverse turn of D_j^-1
    c.charge_u(2 * static_cast<std::uint64_t>(K) * c.rev_cost());
    c.charge_u(t * c.reflection_cost());
    c.charge_v(t * c.reflection_cost());
    if (ev) {
      ev->times.push_back(t);
      ev->beta.push_back(beta);
    }
  }
  const bool flip = ones >= o.closed_rho * o.closed_registers - 1e-12;
  if (ev) ev->flipped = flip;
  return flip ? Vector(-a) : a;
}

namespace {

void charge_inv_expected(const DistinguishCase& c) {
  const auto& o = c.options();
  const std::uint64_t rev = c.rev_cost();
  const std::uint64_t check_cost = 2 * static_cast<std::uint64_t>(o.check_copies) * rev;
  // two Checks, Dist_ort and Dist-_ort, then Dist_closed at the mean turn time
  c.charge_u(2 * check_cost + 2 * check_cost);
  c.charge_v(2 * check_cost);
  const std::uint64_t nd = static_cast<std::uint64_t>(o.closed_registers);
  c.charge_u(nd * (o.turn_bound() * c.reflection_cost() + 2 * static_cast<std::uint64_t>(o.closed_copies) * rev));
  c.charge_v(nd * o.turn_bound() * c.reflection_cost());
}

Vector inv_component(const Vector& x, const DistinguishCase& c, const Rng& rng) {
  AncillaFlags f;
  check(x, c, f);
  Vector y = dist_ort(x, c, f);
  y = dist_closed(y, c, f, rng);
  y = dist_ort_minus(y, c, f);
  check(y, c, f);
  return y;
}

}  // namespace

Vector inv(const Vector& a, const DistinguishCase& c, const Rng& rng) {
  const Subspaces& s = c.subspaces();
  if (c.options().inv == InvBackend::Projector) {
    charge_inv_expected(c);
    return s.coincident ? a : reflect(s.prime, a);
  }
  const Vector pp = s.prime.cols() ? Vector(s.prime * (s.prime.adjoint() * a)) : Vector(Vector::Zero(a.size()));
  const Vector p0 = s.common.cols() ? Vector(s.common * (s.common.adjoint() * a)) : Vector(Vector::Zero(a.size()));
  const Vector rest = a - pp - p0;
  Vector out = Vector::Zero(a.size());
  const Vector parts[] = {pp, p0, rest};
  for (std::uint64_t i = 0; i < 3; ++i) {
    const double n = parts[i].norm();
    if (n < 1e-14) continue;
    const Vector xn = parts[i] / n;
    const Vector y = inv_component(xn, c, rng.stream("component", i));
    const double sign = std::real(xn.dot(y)) < 0 ? -1.0 : 1.0;
    out += sign * parts[i];
  }
  return out;
}

namespace {

using Reflector = std::function<Vector(const Vector&, const Rng&)>;

DifEvidence dif_run(const DistinguishCase& c, const Rng& rng, const std::string& name, const Reflector& refl) {
  const auto& o = c.options();
  const Eigen::Index N = c.dim();
  const std::uint64_t B = o.stopping.bound(static_cast<std::uint64_t>(N));
  const double far0 = far_mass(0.0, 0.0, o.M, o.L);
  const double far_half = far_mass(0.5, 0.0, o.M, o.L);
  DifEvidence ev;
  ev.name = name;
  for (int attempt = 0; attempt <= o.gap_retries; ++attempt) {
    const Rng ar = rng.stream("attempt", static_cast<std::uint64_t>(attempt));
    int far = 0;
    double residual = 0.0;
    for (int j = 0; j < o.gen_registers; ++j) {
      const Rng jr = ar.stream("gen", static_cast<std::uint64_t>(j));
      Rng yr = jr.stream("y");
      Rng tr = jr.stream("time");
      Rng rr = jr.stream("readout");
      const Vector y = haar_vector(yr, N);
      const Matrix ybasis = y;
      const std::uint64_t t = tr.uniform_int(0, B);
      Vector xi = y;
      for (std::uint64_t i = 0; i < t; ++i) xi = reflect(ybasis, refl(xi, jr.stream("inv", i)));
      const double ov = std::norm(y.dot(xi));
      const double p = ov * far0 + (1 - ov) * far_half;
      far += rr.uniform() < p;
      Vector back = xi;
      for (std::uint64_t i = t; i-- > 0;) back = refl(reflect(ybasis, back), jr.stream("inv", i));
      residual = std::max(residual, (back - y).norm());
    }
    ev.fraction = static_cast<double>(far) / o.gen_registers;
    ev.residual = residual;
    ev.in_gap = ev.fraction > o.gap_lo && ev.fraction < o.gap_hi;
    if (!ev.in_gap) break;
    ++ev.retries;
  }
  ev.flag = !ev.in_gap && ev.fraction >= o.change_rho - 1e-12;
  return ev;
}

// Inv''_U / Inv_U (and the mirrored forms) on the projector backend.
Reflector side_reflector(const DistinguishCase& c, const Matrix& basis, bool u_side) {
  return [&c, basis, u_side](const Vector& x, const Rng&) {
    const auto& o = c.options();
    const std::uint64_t rev = c.rev_cost();
    const std::uint64_t check_cost = 2 * static_cast<std::uint64_t>(o.check_copies) * rev;
    c.charge_u(2 * check_cost);
    c.charge_v(2 * check_cost);
    const std::uint64_t probe = 2 * static_cast<std::uint64_t>(o.closed_copies) * rev;
    u_side ? c.charge_v(probe) : c.charge_u(probe);
    return reflect(basis, x);
  };
}

}  // namespace

DifEvidence dif_same_dim(const DistinguishCase& c, const Rng& rng) {
  if (c.subspaces().dim_u() != c.subspaces().dim_v()) throw std::invalid_argument("dif_same_dim needs equal dimensions");
  return dif_run(c, rng, "same_dim", [&c](const Vector& x, const Rng& r) { return inv(x, c, r); });
}

std::vector<DifEvidence> dif_dim_mismatch(const DistinguishCase& c, const Rng& rng) {
  const Subspaces& s = c.subspaces();
  const auto& o = c.options();
  std::vector<DifEvidence> out;
  if (s.dim_u() == s.dim_v()) return out;
  const bool u_side = s.dim_u() > s.dim_v();
  const Matrix narrow = u_side ? s.u_far(o.narrow_far, false) : s.v_far(o.narrow_far, false);
  const Matrix wide = u_side ? s.u_far(o.ort_far, true) : s.v_far(o.ort_far, true);
  out.push_back(dif_run(c, rng.stream("narrow"), u_side ? "u_gt_v" : "u_lt_v", side_reflector(c, narrow, u_side)));
  out.push_back(dif_run(c, rng.stream("ort"), u_side ? "ort_u_gt_v" : "ort_u_lt_v", side_reflector(c, wide, u_side)));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Same: return "same";
    case Verdict::Different: return "different";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "same";
}

namespace {

void toggle(AncillaFlags& f, const DifEvidence& e) {
  if (!e.flag) return;
  if (e.name == "same_dim") f.same_dim ^= 1;
  if (e.name == "u_gt_v") f.u_gt_v ^= 1;
  if (e.name == "u_lt_v") f.u_lt_v ^= 1;
  if (e.name == "ort_u_gt_v") f.ort_u_gt_v ^= 1;
  if (e.name == "ort_u_lt_v") f.ort_u_lt_v ^= 1;
}

}  // namespace

DifferenceReport difference(const DistinguishCase& c, const Rng& rng) {
  const Subspaces& s = c.subspaces();
  DifferenceReport rep;
  rep.dim_u = s.dim_u();
  rep.dim_v = s.dim_v();
  rep.mu_u = s.mu_u;
  rep.mu_v = s.mu_v;
  rep.seed = rng.key();
  const std::uint64_t qu0 = c.queries_u(), qv0 = c.queries_v();

  auto differ = [&](std::vector<DifEvidence>& ev) {
    if (s.dim_u() == s.dim_v()) {
      ev.push_back(dif_same_dim(c, rng.stream("same_dim")));
    } else {
      for (auto& e : dif_dim_mismatch(c, rng.stream("mismatch"))) ev.push_back(std::move(e));
    }
    for (const auto& e : ev) toggle(rep.flags, e);
  };
  differ(rep.evidence);
  rep.flags.alpha_dif ^= rep.flags.any_dif();
  std::vector<DifEvidence> undo;
  differ(undo);

  const bool gap = std::any_of(rep.evidence.begin(), rep.evidence.end(), [](const DifEvidence& e) { return e.in_gap; });
  rep.verdict = rep.flags.alpha_dif ? Verdict::Different : gap ? Verdict::Indeterminate : Verdict::Same;
  rep.queries_u = c.queries_u() - qu0;
  rep.queries_v = c.queries_v() - qv0;
  return rep;
}

Vector difference_sign(const Vector& a, const DistinguishCase& c, const Rng& rng) {
  return difference(c, rng).verdict == Verdict::Different ? Vector(-a) : a;
}

std::string to_string(PromiseClass p) {
  switch (p) {
    case PromiseClass::Equal: return "equal";
    case PromiseClass::EqualDim: return "equal-dim";
    case PromiseClass::NestedMismatch: return "nested-mismatch";
    case PromiseClass::AngledMismatch: return "angled-mismatch";
    case PromiseClass::Empty: return "empty";
  }
  return "equal";
}

PromiseClass promise_class_from_string(const std::string& s) {
  for (auto p : {PromiseClass::Equal, PromiseClass::EqualDim, PromiseClass::NestedMismatch,
                 PromiseClass::AngledMismatch, PromiseClass::Empty})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown promise class '" + s + "'");
}

PairFixture make_pair_fixture(PromiseClass kind, int n, int M, int omega_l, double d, const Rng& rng) {
  if (n < 2) throw std::invalid_argument("pair fixtures need n >= 2");
  if (M < 2 || omega_l < 0 || omega_l >= M) throw std::invalid_argument("fixture frequency outside the grid");
  if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("d must lie in (0, 1]");
  const Eigen::Index N = Eigen::Index{1} << n;
  Rng wr = rng.stream("basis");
  const Matrix W = haar_unitary(wr, N);
  const double omega = static_cast<double>(omega_l) / M;
  // column i of W has frequency freq[i]; columns 0 and 1 start at omega
  std::vector<double> fu(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) {
    const int l = i < 2 ? omega_l : (omega_l + 1 + static_cast<int>(i % (M - 1))) % M;
    fu[static_cast<std::size_t>(i)] = static_cast<double>(l) / M;
  }
  const double other = static_cast<double>((omega_l + 1) % M) / M;
  auto build = [&](const Matrix& basis, const std::vector<double>& f) {
    Vector ph(N);
    for (Eigen::Index i = 0; i < N; ++i) ph[i] = std::polar(1.0, 2 * M_PI * f[static_cast<std::size_t>(i)]);
    return Matrix(basis * ph.asDiagonal() * basis.adjoint());
  };
  auto rotate = [&](Matrix basis, Eigen::Index i, Eigen::Index j, double s) {
    const double c = std::sqrt(1 - s * s);
    const Vector a = basis.col(i), b = basis.col(j);
    basis.col(i) = c * a + s * b;
    basis.col(j) = -s * a + c * b;
    return basis;
  };

  PairFixture fx;
  fx.kind = kind;
  fx.omega = omega;
  std::vector<double> fv = fu;
  Matrix Wv = W;
  switch (kind) {
    case PromiseClass::Equal:
      break;
    case PromiseClass::EqualDim:
      Wv = rotate(W, 0, 2, d);
      break;
    case PromiseClass::NestedMismatch:
      fv[1] = other;
      break;
    case PromiseClass::AngledMismatch:
      fv[1] = other;
      Wv = rotate(W, 0, 2, 0.8);
      break;
    case PromiseClass::Empty:
      fu[1] = other;
      fv[0] = other;
      fv[1] = other;
      break;
  }
  fx.u = build(W, fu);
  fx.v = build(Wv, fv);
  return fx;
}

DevicePtr controlled_device(const DevicePtr& u) {
  const Matrix m = u->matrix();
  const Eigen::Index N = m.rows();
  Matrix c = Matrix::Zero(2 * N, 2 * N);
  c.topLeftCorner(N, N) = Matrix::Identity(N, N);
  c.bottomRightCorner(N, N) = m;
  return make_matrix_device(c);
}

DeviceComparison compare_devices(const DevicePtr& u0, const DevicePtr& v0, const DeviceSearchOptions& opt,
                                 const Rng& rng) {
  const DevicePtr u = opt.controlled ? controlled_device(u0) : u0;
  const DevicePtr v = opt.controlled ? controlled_device(v0) : v0;
  std::vector<int> ls = opt.frequencies;
  if (ls.empty())
    for (int l = 0; l < opt.dist.M; ++l) ls.push_back(l);
  DeviceComparison out;
  for (int l : ls) {
    if (l < 0 || l >= opt.dist.M) throw std::invalid_argument("checked frequency outside the grid");
    DistinguishCase c(u, v, static_cast<double>(l) / opt.dist.M, opt.dist);
    const DifferenceReport r = difference(c, rng.stream("freq", static_cast<std::uint64_t>(l)));
    out.queries += c.queries();
    if (r.verdict == Verdict::Different) {
      out.differ = true;
      break;
    }
    out.indeterminate |= r.verdict == Verdict::Indeterminate;
  }
  return out;
}

DeviceReport recognize_device(const DevicePtr& u, const std::vector<DevicePtr>& family, const DeviceSearchOptions& opt,
                              const Rng& rng) {
  if (family.empty()) throw std::invalid_argument("empty device family");
  if (opt.attempts < 1) throw std::invalid_argument("device search needs attempts >= 1");
  const std::uint64_t T = family.size();
  DeviceReport rep;
  rep.family = T;
  rep.seed = rng.key();

  auto same = [&](std::uint64_t i, const Rng& r, std::uint64_t& cost) {
    const DeviceComparison cmp = compare_devices(u, family[i], opt, r);
    cost = cmp.queries;
    return !cmp.differ && !cmp.indeterminate;
  };
  std::vector<char> marked(T, 0);
  std::uint64_t check_cost = 0;
  for (std::uint64_t i = 0; i < T; ++i) {
    std::uint64_t cost = 0;
    marked[i] = same(i, rng.stream("mark", i), cost);
    check_cost += cost;
  }
  check_cost /= T;
  for (int a = 0; a < opt.attempts; ++a) {
    Rng ar = rng.stream("attempt", static_cast<std::uint64_t>(a));
    const SearchSample s = random_time_search([&](std::uint64_t i) { return marked[i] != 0; }, T, opt.stopping, ar);
    ++rep.attempts;
    rep.sampled.push_back(s.outcome);
    rep.marked_evaluations += s.t;
    rep.queries += s.t * check_cost;
    std::uint64_t cost = 0;
    const bool ok = same(s.outcome, rng.stream("verify", static_cast<std::uint64_t>(a)), cost);
    ++rep.verifications;
    rep.queries += cost;
    if (ok) {
      rep.code = s.outcome;
      break;
    }
  }
  return rep;
}

DeviceDecision recognize_device_majority(const DevicePtr& u, const std::vector<DevicePtr>& family, int runs,
                                         double rho, const DeviceSearchOptions& opt, const Rng& rng) {
  if (runs < 1) throw std::invalid_argument("majority needs runs >= 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  DeviceDecision d;
  d.runs = runs;
  std::map<std::uint64_t, int> tally;
  for (int r = 0; r < runs; ++r) {
    d.reports.push_back(recognize_device(u, family, opt, rng.stream("run", static_cast<std::uint64_t>(r))));
    if (const auto& c = d.reports.back().code) {
      ++d.found;
      ++tally[*c];
    }
  }
  if (d.found >= rho * runs - 1e-12) {
    auto best = std::max_element(tally.begin(), tally.end(),
                                 [](const auto& x, const auto& y) { return x.second < y.second; });
    d.code = best->first;
  }
  return d;
}

std::vector<std::uint64_t> involutive_family(const CodeSpace& space, std::size_t count) {
  std::vector<std::uint64_t> out;
  std::vector<Matrix> seen;
  for (std::uint64_t c = 0; c < space.size() && out.size() < count; ++c) {
    const Matrix m = build_unitary(space, c).matrix();
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    if ((m * m - id).norm() > 1e-9 || (m - id).norm() < 1e-9 || (m + id).norm() < 1e-9) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const Matrix& s) { return (s - m).norm() < 1e-9; })) continue;
    seen.push_back(m);
    out.push_back(c);
  }
  if (out.size() < count) throw std::invalid_argument("code space holds too few distinct involutions");
  return out;
}

}  // namespace qrec
