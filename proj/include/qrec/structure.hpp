#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrec/circuit.hpp"
#include "qrec/recognize.hpp"

namespace qrec {

enum class MatchMode { Determined, Contains, Excludes };

std::string to_string(MatchMode m);
MatchMode match_mode_from_string(std::string_view s);

// Target set w = {l_i / M}.
struct SpectrumSpec {
  int M = 8;
  int L = 128;
  std::vector<int> frequencies;  // l_i, distinct, in [0, M)
  MatchMode mode = MatchMode::Determined;

  void validate() const;
  bool contains(int l) const;
};

struct StructureOptions {
  int copies = 5;          // j: independent State^omega runs per candidate
  int registers = 16;      // k: registers per run
  double rho_copies = 0.2;  // fraction of runs that must agree
  double rho_registers = 0.1;
  int v = 2;
  Backend backend = Backend::Projector;
  StoppingPolicy stopping;
  bool oracle_marking = false;  // mark codes with the exact spectrum instead of State^omega
  int attempts = 4;             // Grover samples per run before not-found
  std::uint64_t max_codes = 4096;
};

struct FrequencyEvidence {
  int l = 0;
  bool in_spec = false;
  bool found = false;  // a spectrum frequency sits within 1/L of l/M
  bool bad = false;
  std::vector<double> fractions;  // per copy; empty on the oracle path
  std::uint64_t queries = 0;
};

struct MatchVerdict {
  bool matches = false;
  std::vector<int> bad;
  std::vector<FrequencyEvidence> evidence;
  std::vector<double> off_grid;  // oracle path: frequencies farther than 1/L from every grid point
  std::uint64_t queries = 0;
};

/// Candidate classification from the exact spectrum.
FrequencyEvidence oracle_frequency(const SpectralDecomposition& dec, int l, const SpectrumSpec& spec);
MatchVerdict oracle_spectrum_matches(const Matrix& u, const SpectrumSpec& spec);

/// Candidate classification from State^omega statistics.
FrequencyEvidence frequency_evidence(const Device& u, const SpectralOracle& oracle, int l, const SpectrumSpec& spec,
                                     const StructureOptions& opt, const Rng& rng);
bool is_bad_frequency(const Device& u, int l, const SpectrumSpec& spec, const StructureOptions& opt, const Rng& rng);

/// Scans l = 0..M-1; matches iff none is bad.
MatchVerdict spectrum_matches(const Device& u, const SpectrumSpec& spec, const StructureOptions& opt,
                              const Rng& rng);

struct StructureReport {
  std::optional<std::uint64_t> code;  // empty: not found
  std::uint64_t family = 0;           // T
  int attempts = 0;
  std::vector<std::uint64_t> sampled;  // Grover outcomes, in order
  std::uint64_t marked_evaluations = 0;  // applications of the code reflection
  std::uint64_t verifications = 0;
  std::uint64_t queries = 0;  // U applications inside State^omega checks
  std::uint64_t seed = 0;
};

/// Grover over the first `family` codes of the space (0: all) with the
/// spectrum check as the marked predicate; every sample is re-checked.
StructureReport find_structure(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family,
                               const StructureOptions& opt, const Rng& rng);

struct StructureDecision {
  std::optional<std::uint64_t> code;
  int runs = 0;
  int found = 0;  // runs that returned a verified code
  double rho = 0.5;
  std::vector<StructureReport> reports;
};

/// Found iff at least rho of the runs found a code; the most frequent code wins.
StructureDecision find_structure_majority(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family,
                                          int runs, double rho, const StructureOptions& opt, const Rng& rng);

/// Codes whose exact spectrum matches; the classical reference scan.
std::vector<std::uint64_t> matching_codes(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family);

}  // namespace qrec
