#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qrec/io.hpp"

namespace qrec {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (log x, log y).
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepPoint {
  double x = 0.0;
  double queries = 0.0;  // mean over trials
  int trials = 0;
};

struct Sweep {
  std::string kind;
  std::vector<SweepPoint> points;
  SlopeFit fit;
};

/// Black-box queries of eigenvalue recognition (projector backend) against N = 2^n.
Sweep recognition_sweep(const std::vector<int>& qubits, int trials, const Rng& rng);
/// Code reflections of oracle-marked structure search against the family size T,
/// for a spec with no match (every run uses all its attempts).
Sweep structure_sweep(const std::vector<std::uint64_t>& families, int trials, const Rng& rng);
/// Queries of one difference call on equal-dim fixtures against 1/d.
Sweep difference_d_sweep(const std::vector<double>& ds, int n, int trials, const Rng& rng);
/// Same against N at fixed d.
Sweep difference_n_sweep(const std::vector<int>& qubits, double d, int trials, const Rng& rng);
Sweep run_sweep(const std::string& kind, const Json& grid, int trials, const Rng& rng);
Json to_json(const Sweep& s);

struct WTypeCheck {
  int unitaries = 0;
  int entries = 0;       // eigenvector inputs
  double min_mass = 1.0;  // smallest window mass seen
  bool pass = true;
};

/// Rev on `count` Haar unitaries (n = 1..max_qubits, cycling through Ls), every
/// eigenvector input, window K/L.
WTypeCheck verify_rev(int count, const std::vector<int>& Ls, int max_qubits, int K, const Rng& rng);

struct RestCheck {
  int M = 4, L = 64;
  int cases = 0;
  double max_turning = 0.0;  // worst D-based residual
  double max_inverse = 0.0;
  double bound = 0.0;         // 7M/L
  bool pass = true;
};

/// Rest Rev on random chi for random sparse unitaries (n = 2).
RestCheck verify_rest(int M, int L, int cases, const Rng& rng);

/// First `count` codes with distinct operators, in code order.
std::vector<std::uint64_t> distinct_codes(const CodeSpace& space, std::size_t count);

/// Named fixture bundles: "sparse-spectrum", "equal-spectrum-pair",
/// "involutive-family", "thermo-levels", "structure-spec".
Json make_fixture(const std::string& name, const Json& params, const Rng& rng);

struct ExperimentConfig {
  std::string pipeline;
  Json params = Json::object();
  std::uint64_t seed = 0;

  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);
};

struct ExperimentResult {
  Json report;
  bool indeterminate = false;
};

/// Dispatches to the named pipeline. The report body depends only on the config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// "Q/L" -> (Q, L)
std::pair<int, int> parse_fraction(const std::string& s);

}  // namespace qrec
