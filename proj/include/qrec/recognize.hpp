#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrec/amplify.hpp"
#include "qrec/phase.hpp"

namespace qrec {

enum class Backend { Projector, Circuit };

std::string to_string(Backend b);
Backend backend_from_string(std::string_view s);

// Candidate omega~ = omega_l / L on the fine grid.
struct EigenQuery {
  int omega_l = 0;
  int M = 4;
  int L = 64;
  int v = 2;   // ancilla copies inside I~_E
  int h = 32;  // concentrated registers
  Backend backend = Backend::Projector;
  double accept_rho = 5.0 / 32.0;  // fraction of matching registers to accept
  double sign_rho = 0.5;           // fraction of matching ancillas for Sign
  StoppingPolicy stopping;
  RestKind rest = RestKind::Inverse;

  double omega() const { return static_cast<double>(omega_l) / L; }
  int p() const { return log2_exact(static_cast<std::uint64_t>(L)); }
  void validate() const;
};

/// |l/L - omega~| <= 1/L, circularly.
bool readout_matches(const EigenQuery& q, std::uint64_t l);

// Exact spectral access used by the projector backend and for Turning tables.
struct SpectralOracle {
  SpectralDecomposition dec;
  std::optional<SparsityProfile> profile;
  double window = 0.0;  // used without a profile: eigenspaces within this circular distance

  static SpectralOracle from_matrix(const Matrix& u, int M, int L);
  // No sparsity requirement; E_omega collects every eigenspace within 1/L.
  static SpectralOracle windowed(const Matrix& u, int L);
  Matrix eigenspace_basis(double omega) const;
  const SparsityProfile& require_profile() const;
};

struct RegisterRecord {
  std::uint64_t t = 0;
  double overlap = 0.0;             // ||P_E chi||^2; NaN when no oracle is available
  std::vector<double> readout_dist;  // distribution of the frequency register
  double match_mass = 0.0;          // readout mass inside the acceptance window
  std::uint64_t readout = 0;
  bool match = false;
};

struct RecognitionReport {
  bool verdict = false;
  double fraction = 0.0;
  int matches = 0;
  std::uint64_t queries = 0;  // applications of U (forward and inverse)
  std::uint64_t seed = 0;
  EigenQuery query;
  std::vector<RegisterRecord> registers;
};

/// Layout for the circuit backend: "x" plus ancillas "a0".."a{v-1}".
RegisterLayout reflection_layout(int n, const EigenQuery& q);
std::string ancilla_name(int j);

/// I~_E on a state laid out by reflection_layout. Projector backend: exact
/// I_E on "x" (needs the oracle). Circuit backend: (x) Rest Sign (x) Rev.
void reflect_eigenspace_inplace(StateVector& s, const EigenQuery& q, const Device& u,
                                const SpectralOracle* oracle = nullptr, const FrequencyTable* table = nullptr);

struct ConcentrateResult {
  std::vector<StateVector> registers;  // chi_k; layout "x" (projector) or reflection_layout (circuit)
  std::vector<std::uint64_t> times;
  std::vector<double> overlaps;  // ||P_E chi_k||^2, NaN without oracle
  std::uint64_t queries = 0;
};

/// State^omega: h independent (I_a I_E)^t a registers.
ConcentrateResult state_concentrate(const EigenQuery& q, const Device& u, const Rng& rng,
                                    const SpectralOracle* oracle = nullptr);

/// Accept iff at least accept_rho of the h readouts fall in the window.
RecognitionReport recognize_eigenvalue(const EigenQuery& q, const Device& u, const Rng& rng,
                                       const SpectralOracle* oracle = nullptr);

/// Predicted U-application count for the projector backend, given the register times.
std::uint64_t recognition_queries(const EigenQuery& q, const std::vector<std::uint64_t>& times);

}  // namespace qrec
