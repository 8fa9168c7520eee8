#pragma once

#include <optional>
#include <vector>

#include "qrec/recognize.hpp"

namespace qrec {

struct Level {
  double energy = 0.0;
  int degeneracy = 1;
};

// Either a dense Hermitian matrix or an explicit level list.
class HamiltonianSpec {
 public:
  static HamiltonianSpec from_matrix(Matrix h, double tol = 1e-8);
  /// Energies strictly increasing, degeneracies >= 1, total a power of two.
  static HamiltonianSpec from_levels(std::vector<Level> levels);

  bool has_matrix() const { return matrix_.has_value(); }
  const std::vector<Level>& levels() const { return levels_; }
  int dim() const;
  /// The matrix, or W diag(E) W^dagger with a Haar W for a level list.
  Matrix to_matrix(Rng& rng) const;
  /// Exact eigenvalues, ascending, one per eigenvector.
  std::vector<double> eigenvalues() const;

 private:
  std::optional<Matrix> matrix_;
  std::vector<Level> levels_;
};

// omega(E) = (top - E) / width; energies in [bottom, top] land in [0, span].
struct FrequencyMap {
  double top = 0.0;
  double width = 1.0;
  double frequency(double energy) const { return wrap_unit((top - energy) / width); }
  /// Inverse on [-(1 - span)/2, (1 + span)/2), wrapped.
  double energy(double omega) const;
  double span = 0.75;
};

struct Rescaled {
  Matrix u;
  FrequencyMap map;
  bool single_level = false;
};

/// U = exp(2 pi i (top - H) / width), all frequencies in [0, span].
Rescaled rescale_to_unitary(const Matrix& h, double span = 0.75);

struct ThermoResult {
  double kbt = 1.0;
  double Q = 0.0;
  double mean_energy = 0.0;
  double entropy = 0.0;          // units of k_B
  double truncation_bound = 0.0;  // first omitted Boltzmann term relative to Q
  std::vector<Level> levels;     // levels used
};

/// F = sum a(j) d_j e^{-E_j/kT} for a = 1 (Q), E_j/Q (mean energy) and the Gibbs entropy weight.
/// keep: number of lowest levels used (0 = all).
ThermoResult thermo_functions(std::vector<Level> levels, double kbt, std::size_t keep = 0);

struct ThermoOptions {
  int M = 8;
  int h = 32;
  int v = 2;
  double eps = 0.05;
  double span = 0.75;
  std::size_t max_levels = 0;     // 0 = no cap
  double weight_cutoff = 1e-6;    // drop levels below this fraction of the leading Boltzmann term
  CountOptions counting;
};

struct RecognizedLevel {
  int anchor = 0;
  double omega = 0.0;  // refined frequency estimate
  double energy = 0.0;
  int degeneracy = 0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double fraction = 0.0;
  std::uint64_t queries = 0;
};

struct ThermoReport {
  FrequencyMap map;
  std::vector<RecognizedLevel> levels;
  std::vector<ThermoResult> results;  // one per requested temperature
  std::uint64_t queries = 0;
};

/// Accepted anchors l (candidate l/M) for the unitary.
std::vector<RecognitionReport> find_anchor_frequencies(const Device& u, const SpectralOracle& oracle,
                                                       const ThermoOptions& opt, const Rng& rng);

/// Degeneracy of E_omega by rotation-time counting with the exact reflection.
CountResult degeneracy(const SpectralOracle& oracle, double omega, double eps, const Rng& rng,
                       const CountOptions& opt = {});

/// rescale -> anchors -> degeneracies -> Eq. (1) at each temperature.
ThermoReport run_thermo(const HamiltonianSpec& h, const std::vector<double>& kbts, const ThermoOptions& opt,
                        const Rng& rng);

}  // namespace qrec
