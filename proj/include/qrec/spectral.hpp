#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrec/dense_unitary.hpp"

namespace qrec {

class InvalidProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Eigenspace {
  double omega = 0.0;  // eigenvalue e^{2 pi i omega}, omega in [0,1)
  Matrix basis;        // N x d, orthonormal columns
  int dim() const { return static_cast<int>(basis.cols()); }
};

struct SpectralDecomposition {
  Eigen::Index N = 0;
  std::vector<Eigenspace> spaces;  // sorted by omega

  std::vector<double> frequencies() const;
  std::vector<int> dims() const;
  Matrix reconstruct() const;
};

/// Eigenvalues closer than this (as points on the unit circle) are merged.
inline constexpr double kClusterTolerance = 1e-9;

SpectralDecomposition decompose(const DenseUnitary& u);
SpectralDecomposition decompose(const Matrix& u);

struct FrequencyGroup {
  int anchor = -1;                   // l with l/M anchoring the group
  std::vector<std::size_t> members;  // indices into SpectralDecomposition::spaces
  std::vector<double> frequencies;
  int degeneracy = 0;
};

struct SparsityProfile {
  int M = 1;
  int L = 16;
  std::vector<FrequencyGroup> groups;

  /// Group with a member within 1/L of omega, if any.
  const FrequencyGroup* group_near(double omega) const;
  const FrequencyGroup* group_at_anchor(int l) const;
};

/// Groups frequencies and checks the sparsity conditions: inter-group distance
/// > 1/M, intra-group spread < 1/L, exactly one anchor l/M per group (between
/// two members, or within 1/L of a member).
SparsityProfile make_profile(const SpectralDecomposition& dec, int M, int L);
/// Same checks; returns the violation instead of throwing.
std::optional<SparsityProfile> try_profile(const SpectralDecomposition& dec, int M, int L, std::string* why = nullptr);

/// Orthonormal basis of E_omega: every eigenspace in the group near omega.
/// Zero columns when omega is not near any frequency.
Matrix projector_basis(const SpectralDecomposition& dec, double omega, const SparsityProfile& profile);
Matrix projector(const SpectralDecomposition& dec, double omega, const SparsityProfile& profile);
/// Eigenspaces within tol of omega, no grouping.
Matrix projector_basis(const SpectralDecomposition& dec, double omega, double tol);

struct SubspaceDistances {
  double mu_u = 0.0;  // max over unit u in range(P_U) of dist(u, range(P_V))
  double mu_v = 0.0;
  bool u_empty = false;
  bool v_empty = false;
};

/// Orthonormal basis of range(P); throws if P is not a projector within 1e-8.
Matrix range_basis(const Matrix& p);
SubspaceDistances subspace_distances(const Matrix& p_u, const Matrix& p_v);
SubspaceDistances subspace_distances_from_bases(const Matrix& q_u, const Matrix& q_v);
bool is_d_distinguishable(const SubspaceDistances& mu, double d);

struct ChannelEntry {
  double omega = 0.0;             // true frequency of the eigenvector input
  std::vector<double> ancilla;    // ancilla distribution, length L
};

/// Mass of the ancilla distribution within circular distance eps of omega.
double window_mass(const ChannelEntry& e, double eps);
/// True iff every entry has window mass >= 1 - 2/K at eps = K/L.
bool verify_w_type(const std::vector<ChannelEntry>& channel, int K, double tol = 1e-9);

}  // namespace qrec
