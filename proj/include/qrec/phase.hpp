#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qrec/device.hpp"
#include "qrec/spectral.hpp"

namespace qrec {

enum class Provenance { Oracle, Measured, Injected };

std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct FrequencyEstimate {
  int h = 0;           // fine index, (0.h)_p approximates the frequency
  double omega = 0.0;  // the estimate itself, finer than the 1/L grid when known
};

// Coarse index l -> fine approximation of the frequency of the group anchored
// at l/M.
struct FrequencyTable {
  int M = 1;
  int L = 16;
  std::map<int, FrequencyEstimate> entries;
  Provenance provenance = Provenance::Oracle;

  /// Entry whose estimate is circularly nearest to x; throws on an empty table.
  const FrequencyEstimate& nearest(double x) const;
};

/// h(l) = round(L * omega) (mod L) for the group anchored at l; omega is the
/// degeneracy-weighted mean frequency of the group.
FrequencyTable build_frequency_table(const SpectralDecomposition& dec, const SparsityProfile& profile);

/// e^{-2 pi i s l / L} / sqrt(L)
Matrix qft_matrix(int L);
void qft_inplace(StateVector& s, std::string_view reg, int L);
void qft_inverse_inplace(StateVector& s, std::string_view reg, int L);
StateVector qft(const StateVector& s, std::string_view reg, int L);

struct RevOptions {
  /// Replace the first QFT by a Hadamard layer; only valid on a zeroed ancilla.
  bool hadamard_first = false;
};

/// Rev = QFT_L U_seq QFT_L on (ancilla, target). L-1 applications of u.
void rev_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L,
                 const RevOptions& opt = {});
StateVector rev(const StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L,
                const RevOptions& opt = {});
/// Rev^{-1}; applies the inverse of u, so only for white-box devices.
void rev_inverse_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target, int L);

/// Closed-form Rev output amplitude at index l for an eigenvector of frequency omega.
Complex rev_amplitude(double omega, int l, int L);
std::vector<double> rev_distribution(double omega, int L);

struct TurningOptions {
  /// Phase multiplier in e^{-2 pi i m delta}; the default (negative) means L-1.
  double multiplier = -1.0;
  /// Optional scratch register that Enh writes the table index into.
  std::string scratch;
};

/// D = Enh D~ Enh: phase e^{-2 pi i m (omega^ - l/L)} on ancilla value l, where
/// omega^ is the tabulated estimate nearest to l/L.
void turning_inplace(StateVector& s, const FrequencyTable& table, std::string_view ancilla, int L,
                     const TurningOptions& opt = {});
StateVector turning(const StateVector& s, const FrequencyTable& table, std::string_view ancilla, int L,
                    const TurningOptions& opt = {});

enum class RestKind { Inverse, Turning };

std::string to_string(RestKind k);
RestKind rest_kind_from_string(std::string_view s);

/// Rest = Rev D (black-box safe) or Rev^{-1} (white box).
void rest_inplace(StateVector& s, const Device& u, std::string_view ancilla, std::string_view target,
                  const FrequencyTable& table, int L, RestKind kind = RestKind::Turning,
                  const TurningOptions& opt = {});
StateVector rest(const StateVector& s, const Device& u, std::string_view ancilla, std::string_view target,
                 const FrequencyTable& table, int L, RestKind kind = RestKind::Turning,
                 const TurningOptions& opt = {});

/// ||Rest Rev |chi,0> - |chi,0>|| for a state given on the target register.
double restoration_residual(const Vector& chi, const Device& u, const FrequencyTable& table, int L, RestKind kind,
                            const TurningOptions& opt = {});

}  // namespace qrec
