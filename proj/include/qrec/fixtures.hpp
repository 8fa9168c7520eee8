#pragma once

#include <vector>

#include "qrec/rng.hpp"
#include "qrec/spectral.hpp"

namespace qrec {

/// W diag(e^{2 pi i w_j}) W^dagger with a Haar-random W; one frequency per basis vector.
Matrix unitary_with_spectrum(Rng& rng, const std::vector<double>& freqs);

struct SparseSpectrumOptions {
  int groups = 2;              // number of frequency groups (anchors)
  bool multi_member = false;   // allow two distinct frequencies inside a group
  double offset_scale = 1.0;   // offsets drawn from (-scale/L, scale/L) around the anchor
  bool even_anchors = true;    // anchors on even l only, which keeps groups > 1/M apart
};

struct SpectrumFixture {
  Matrix u;
  std::vector<double> freqs;  // per eigenvector
  SpectralDecomposition dec;
  SparsityProfile profile;
};

/// Random unitary on n qubits whose spectrum satisfies the sparsity profile for (M, L).
SpectrumFixture random_sparse_unitary(Rng& rng, int n, int M, int L, const SparseSpectrumOptions& opt = {});

}  // namespace qrec
