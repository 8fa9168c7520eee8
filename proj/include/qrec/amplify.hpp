#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qrec/query_counter.hpp"
#include "qrec/rng.hpp"
#include "qrec/state_vector.hpp"

namespace qrec {

// I_A = 1 - 2 P_A: flips the sign of the marked component, identity when the
// marked set is empty.
class ReflectionSpec {
 public:
  enum class Kind { Basis, Predicate, Projector };

  static ReflectionSpec basis_state(std::uint64_t index);
  static ReflectionSpec predicate(std::function<bool(std::uint64_t)> marked);
  /// Columns must be orthonormal; zero columns gives the identity.
  static ReflectionSpec projector(Matrix basis);
  /// Rank-1 reflection along a vector (normalized internally).
  static ReflectionSpec along(const Vector& v);
  static ReflectionSpec none();

  Kind kind() const { return kind_; }
  void apply(Vector& x) const;
  /// ||P_A x||^2
  double weight(const Vector& x) const;
  Matrix matrix(Eigen::Index dim) const;
  const Matrix& basis() const { return basis_; }

 private:
  Kind kind_ = Kind::Predicate;
  std::uint64_t index_ = 0;
  std::function<bool(std::uint64_t)> pred_;
  Matrix basis_;
};

/// (I_start I_marked)^t applied to state.
Vector grover_iterate(const Vector& state, const ReflectionSpec& marked, const ReflectionSpec& start, std::uint64_t t);
StateVector grover_iterate(const StateVector& state, const ReflectionSpec& marked, const ReflectionSpec& start,
                           std::uint64_t t);

struct StoppingPolicy {
  double beta = 2.0;
  /// B = ceil(beta sqrt(N))
  std::uint64_t bound(std::uint64_t N) const;
};

enum class StartKind { Uniform, Haar };

/// Exact average over t in {0..B} of the marked-set probability, uniform start.
double mean_success_probability(std::uint64_t N, const std::function<bool(std::uint64_t)>& marked,
                                const StoppingPolicy& policy = {});

struct SearchSample {
  std::uint64_t outcome = 0;
  std::uint64_t t = 0;
};

SearchSample random_time_search(const std::function<bool(std::uint64_t)>& marked, std::uint64_t N,
                                const StoppingPolicy& policy, Rng& rng, StartKind start = StartKind::Uniform,
                                QueryCounter* counter = nullptr);

struct MajorityDecision {
  int k = 0;
  double rho = 0.2;
  std::vector<std::uint64_t> votes;
  std::optional<std::uint64_t> value;  // empty: not found
  int support = 0;                     // votes for the verdict value (or the top value)
};

/// Verdict v iff at least rho*k votes equal v; the more frequent of two such
/// values wins, an exact tie is not-found.
MajorityDecision decide_majority(std::vector<std::uint64_t> votes, double rho);

MajorityDecision majority_search(const std::function<bool(std::uint64_t)>& marked, std::uint64_t N, int k,
                                 double rho, Rng& rng, const StoppingPolicy& policy = {},
                                 StartKind start = StartKind::Uniform, QueryCounter* counter = nullptr);

struct CountOptions {
  int registers = 1024;           // J: independent (a_j, t_j) registers per probe
  double horizon_factor = 2.0;    // sweep stops at h >= ceil(factor sqrt(N))
};

struct CountResult {
  int d_hat = 0;                  // refined estimate
  int rough = 0;                  // fit over the sweep only
  double bracket_lo = 0.0;        // 3A/4
  double bracket_hi = 0.0;        // A
  bool stopped_by_rule = true;    // false if the horizon cap ended the sweep
  std::vector<std::pair<int, double>> sweep;   // (h, fidelity)
  std::vector<std::pair<int, double>> probes;  // refinement (h, fidelity)
  std::uint64_t reflections = 0;  // applications of I_E
};

/// Rank of E from Grover rotation statistics. basis: N x d orthonormal basis
/// of E (the reflection I_E = 1 - 2 P_E).
CountResult count_rotation_time(const Matrix& basis, double eps, Rng& rng, const CountOptions& opt = {});
CountResult count_rotation_time(const ReflectionSpec& reflection, std::uint64_t N, double eps, Rng& rng,
                                const CountOptions& opt = {});

/// Expected fidelity for rank d in dimension N at horizon h: mean over
/// t in {0..h} and Haar a of sin^2((2t+1) theta), sin theta = |P_E a|.
double fidelity_model(int N, int d, int h);

/// Documented relative error curve g(eps) of the refined estimate, calibrated
/// on the synthetic family (N in {32, 64}, d in {1, 2, 4, 8}).
double calibrated_error(double eps);

}  // namespace qrec
