#include "qrec/spectral.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qrec {

namespace {

constexpr double kEdge = 1e-12;

double omega_of(Complex z) { return wrap_unit(std::arg(z) / kTwoPi); }

}  // namespace

std::vector<double> SpectralDecomposition::frequencies() const {
  std::vector<double> out;
  for (const auto& s : spaces) out.push_back(s.omega);
  return out;
}

std::vector<int> SpectralDecomposition::dims() const {
  std::vector<int> out;
  for (const auto& s : spaces) out.push_back(s.dim());
  return out;
}

Matrix SpectralDecomposition::reconstruct() const {
  Matrix u = Matrix::Zero(N, N);
  for (const auto& s : spaces) u += phase(s.omega) * s.basis * s.basis.adjoint();
  return u;
}

SpectralDecomposition decompose(const DenseUnitary& u) { return decompose(u.matrix()); }

SpectralDecomposition decompose(const Matrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("decompose needs a square matrix");
  if (unitarity_defect(u) > DenseUnitary::kTolerance) throw NotUnitaryError("decompose: input is not unitary");
  const Eigen::Index n = u.rows();
  // A unitary is normal, so its Schur form is diagonal and the Schur vectors
  // are orthonormal eigenvectors.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) w[i] = omega_of(t(i, i));
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] < w[b]; });

  std::vector<std::vector<Eigen::Index>> clusters;
  for (Eigen::Index idx : order) {
    if (!clusters.empty() && std::abs(t(idx, idx) - t(clusters.back().back(), clusters.back().back())) < kClusterTolerance) {
      clusters.back().push_back(idx);
    } else {
      clusters.push_back({idx});
    }
  }
  // eigenvalues near 1 can land on both ends of [0,1)
  if (clusters.size() > 1 &&
      std::abs(t(clusters.front().front(), clusters.front().front()) - t(clusters.back().back(), clusters.back().back())) <
          kClusterTolerance) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  SpectralDecomposition dec;
  dec.N = n;
  for (const auto& c : clusters) {
    Eigenspace es;
    Complex mean = 0.0;
    es.basis.resize(n, static_cast<Eigen::Index>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) {
      mean += t(c[j], c[j]);
      es.basis.col(static_cast<Eigen::Index>(j)) = q.col(c[j]);
    }
    es.omega = omega_of(mean);
    if (es.omega > 1.0 - 1e-12) es.omega = 0.0;
    if (c.size() > 1) {
      Eigen::HouseholderQR<Matrix> qr(es.basis);
      es.basis = qr.householderQ() * Matrix::Identity(n, static_cast<Eigen::Index>(c.size()));
    }
    dec.spaces.push_back(std::move(es));
  }
  std::sort(dec.spaces.begin(), dec.spaces.end(), [](const auto& a, const auto& b) { return a.omega < b.omega; });
  return dec;
}

const FrequencyGroup* SparsityProfile::group_near(double omega) const {
  const double tol = 1.0 / L + kEdge;
  for (const auto& g : groups)
    for (double f : g.frequencies)
      if (circular_distance(f, omega) <= tol) return &g;
  return nullptr;
}

const FrequencyGroup* SparsityProfile::group_at_anchor(int l) const {
  for (const auto& g : groups)
    if (g.anchor == l) return &g;
  return nullptr;
}

std::optional<SparsityProfile> try_profile(const SpectralDecomposition& dec, int M, int L, std::string* why) {
  auto fail = [&](std::string msg) -> std::optional<SparsityProfile> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  if (M < 1 || L < 1 || !is_power_of_two(M) || !is_power_of_two(L)) return fail("M and L must be powers of two");
  if (L < M) return fail("L must be at least M");
  const std::size_t k = dec.spaces.size();
  if (k == 0) return fail("empty spectrum");
  const double fine = 1.0 / L;
  const double coarse = 1.0 / M;

  std::vector<std::vector<std::size_t>> groups;
  if (k == 1) {
    groups.push_back({0});
  } else {
    auto gap = [&](std::size_t i) {
      const double a = dec.spaces[i].omega;
      const double b = dec.spaces[(i + 1) % k].omega;
      return i + 1 < k ? b - a : b + 1.0 - a;
    };
    std::size_t start = k;
    for (std::size_t i = 0; i < k; ++i) {
      const double g = gap(i);
      if (g >= fine && g <= coarse) {
        return fail("frequencies " + std::to_string(dec.spaces[i].omega) + " and " +
                    std::to_string(dec.spaces[(i + 1) % k].omega) + " are neither grouped nor separated by 1/M");
      }
      if (g > coarse && start == k) start = (i + 1) % k;
    }
    if (start == k) return fail("all frequencies chain into one group around the circle");
    std::vector<std::size_t> cur;
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t i = (start + s) % k;
      cur.push_back(i);
      if (gap(i) > coarse) {
        groups.push_back(cur);
        cur.clear();
      }
    }
  }

  SparsityProfile prof;
  prof.M = M;
  prof.L = L;
  for (const auto& members : groups) {
    FrequencyGroup g;
    g.members = members;
    const double first = dec.spaces[members.front()].omega;
    double spread = 0.0;
    for (std::size_t i : members) {
      g.frequencies.push_back(dec.spaces[i].omega);
      g.degeneracy += dec.spaces[i].dim();
      spread = std::max(spread, wrap_unit(dec.spaces[i].omega - first));
    }
    if (spread >= fine) return fail("group starting at " + std::to_string(first) + " spreads over 1/L or more");
    // anchors: l/M on the arc [first - 1/L, first + spread + 1/L]
    std::vector<int> anchors;
    for (int l = 0; l < M; ++l) {
      const double pos = wrap_unit(static_cast<double>(l) / M - first + fine);
      if (pos <= spread + 2.0 * fine + kEdge) {
        // accept when between two members or within 1/L of one
        const double x = static_cast<double>(l) / M;
        bool ok = pos >= fine - kEdge && pos <= spread + fine + kEdge;
        for (double f : g.frequencies) ok = ok || circular_distance(f, x) <= fine + kEdge;
        if (ok) anchors.push_back(l);
      }
    }
    if (anchors.empty()) return fail("group starting at " + std::to_string(first) + " has no anchor l/M");
    if (anchors.size() > 1) return fail("group starting at " + std::to_string(first) + " has several anchors");
    g.anchor = anchors.front();
    prof.groups.push_back(std::move(g));
  }
  std::sort(prof.groups.begin(), prof.groups.end(), [](const auto& a, const auto& b) { return a.anchor < b.anchor; });
  return prof;
}

SparsityProfile make_profile(const SpectralDecomposition& dec, int M, int L) {
  std::string why;
  auto p = try_profile(dec, M, L, &why);
  if (!p) throw InvalidProfile("invalid sparsity profile: " + why);
  return *p;
}

Matrix projector_basis(const SpectralDecomposition& dec, double omega, const SparsityProfile& profile) {
  const FrequencyGroup* g = profile.group_near(omega);
  if (!g) return Matrix::Zero(dec.N, 0);
  Eigen::Index cols = g->degeneracy;
  Matrix q(dec.N, cols);
  Eigen::Index c = 0;
  for (std::size_t i : g->members) {
    const auto& b = dec.spaces[i].basis;
    q.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return q;
}

Matrix projector_basis(const SpectralDecomposition& dec, double omega, double tol) {
  Eigen::Index cols = 0;
  for (const auto& s : dec.spaces)
    if (circular_distance(s.omega, omega) <= tol) cols += s.dim();
  Matrix q(dec.N, cols);
  Eigen::Index c = 0;
  for (const auto& s : dec.spaces) {
    if (circular_distance(s.omega, omega) > tol) continue;
    q.middleCols(c, s.dim()) = s.basis;
    c += s.dim();
  }
  return q;
}

Matrix projector(const SpectralDecomposition& dec, double omega, const SparsityProfile& profile) {
  const Matrix q = projector_basis(dec, omega, profile);
  return q * q.adjoint();
}

Matrix range_basis(const Matrix& p) {
  if (p.rows() != p.cols()) throw DimensionError("projector must be square");
  if ((p - p.adjoint()).norm() > 1e-8 || (p * p - p).norm() > 1e-8) {
    throw std::invalid_argument("matrix is not an orthogonal projector");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (es.eigenvalues()[i] > 0.5) keep.push_back(i);
  Matrix q(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return q;
}

namespace {

// max over unit u in span(qa) of ||(I - P_b) u||
double max_sine(const Matrix& qa, const Matrix& qb) {
  const Matrix overlap = qb.adjoint() * qa;  // cosines are its singular values
  Eigen::JacobiSVD<Matrix> svd(overlap);
  double smin = 1.0;
  const auto& s = svd.singularValues();
  if (s.size() < qa.cols()) {
    smin = 0.0;
  } else {
    for (Eigen::Index i = 0; i < s.size(); ++i) smin = std::min(smin, s[i]);
  }
  smin = std::clamp(smin, 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

}  // namespace

SubspaceDistances subspace_distances_from_bases(const Matrix& q_u, const Matrix& q_v) {
  SubspaceDistances out;
  out.u_empty = q_u.cols() == 0;
  out.v_empty = q_v.cols() == 0;
  const double undefined = std::numeric_limits<double>::quiet_NaN();
  if (out.u_empty) out.mu_u = undefined;
  else if (out.v_empty) out.mu_u = 1.0;
  else out.mu_u = max_sine(q_u, q_v);
  if (out.v_empty) out.mu_v = undefined;
  else if (out.u_empty) out.mu_v = 1.0;
  else out.mu_v = max_sine(q_v, q_u);
  return out;
}

SubspaceDistances subspace_distances(const Matrix& p_u, const Matrix& p_v) {
  if (p_u.rows() != p_v.rows()) throw DimensionError("projectors act on different spaces");
  return subspace_distances_from_bases(range_basis(p_u), range_basis(p_v));
}

bool is_d_distinguishable(const SubspaceDistances& mu, double d) {
  if (mu.u_empty != mu.v_empty) return true;
  if (mu.u_empty && mu.v_empty) return false;
  return std::max(mu.mu_u, mu.mu_v) >= d;
}

double window_mass(const ChannelEntry& e, double eps) {
  const int L = static_cast<int>(e.ancilla.size());
  double mass = 0.0;
  for (int l = 0; l < L; ++l)
    if (circular_distance(static_cast<double>(l) / L, e.omega) <= eps + kEdge) mass += e.ancilla[l];
  return mass;
}

bool verify_w_type(const std::vector<ChannelEntry>& channel, int K, double tol) {
  for (const auto& e : channel) {
    const int L = static_cast<int>(e.ancilla.size());
    if (window_mass(e, static_cast<double>(K) / L) < 1.0 - 2.0 / K - tol) return false;
  }
  return true;
}

}  // namespace qrec
