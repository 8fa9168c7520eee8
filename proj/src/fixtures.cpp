#include "qrec/fixtures.hpp"

#include <algorithm>

namespace qrec {

Matrix unitary_with_spectrum(Rng& rng, const std::vector<double>& freqs) {
  const auto n = static_cast<Eigen::Index>(freqs.size());
  const Matrix w = haar_unitary(rng, n);
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = phase(freqs[static_cast<std::size_t>(i)]);
  return w * d * w.adjoint();
}

SpectrumFixture random_sparse_unitary(Rng& rng, int n, int M, int L, const SparseSpectrumOptions& opt) {
  const int N = 1 << n;
  std::vector<int> pool;
  for (int l = 0; l < M; l += opt.even_anchors ? 2 : 1) pool.push_back(l);
  if (opt.groups < 1 || opt.groups > static_cast<int>(pool.size()) || opt.groups > N) {
    throw std::invalid_argument("random_sparse_unitary: cannot place that many groups");
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // choose anchors without replacement
    std::vector<int> anchors = pool;
    for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
      const auto j = i + rng.uniform_int(0, anchors.size() - 1 - i);
      std::swap(anchors[i], anchors[j]);
    }
    anchors.resize(static_cast<std::size_t>(opt.groups));
    // each group gets one or two frequencies
    std::vector<std::vector<double>> members(anchors.size());
    for (std::size_t g = 0; g < anchors.size(); ++g) {
      const double base = static_cast<double>(anchors[g]) / M;
      const double half = 0.5 * opt.offset_scale / L;
      if (opt.multi_member && rng.uniform() < 0.5) {
        // two members straddling the anchor, spread below 1/L
        members[g] = {wrap_unit(base - rng.uniform() * half), wrap_unit(base + rng.uniform() * half)};
      } else {
        members[g] = {wrap_unit(base + (2.0 * rng.uniform() - 1.0) * 2.0 * half)};
      }
    }
    // every group gets at least one eigenvector
    std::vector<double> freqs;
    for (std::size_t g = 0; g < members.size(); ++g)
      for (double f : members[g]) freqs.push_back(f);
    if (static_cast<int>(freqs.size()) > N) continue;
    while (static_cast<int>(freqs.size()) < N) {
      const auto g = rng.uniform_int(0, members.size() - 1);
      const auto k = rng.uniform_int(0, members[g].size() - 1);
      freqs.push_back(members[g][k]);
    }
    // shuffle assignment to basis vectors
    for (std::size_t i = 0; i + 1 < freqs.size(); ++i) {
      const auto j = i + rng.uniform_int(0, freqs.size() - 1 - i);
      std::swap(freqs[i], freqs[j]);
    }
    SpectrumFixture fx;
    fx.freqs = freqs;
    fx.u = unitary_with_spectrum(rng, freqs);
    fx.dec = decompose(fx.u);
    auto prof = try_profile(fx.dec, M, L);
    if (!prof) continue;
    fx.profile = *prof;
    return fx;
  }
  throw std::runtime_error("random_sparse_unitary: could not satisfy the sparsity profile");
}

}  // namespace qrec
