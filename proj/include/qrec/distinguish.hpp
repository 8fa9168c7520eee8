#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrec/amplify.hpp"
#include "qrec/circuit.hpp"
#include "qrec/device.hpp"
#include "qrec/spectral.hpp"

namespace qrec {

class PromiseViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InvBackend { Projector, Composite };

struct DistinguishOptions {
  int M = 4;
  int L = 256;  // L >= 64M
  double d = 0.5;
  int v = 2;  // copies inside each reflection I_L
  int check_copies = 10;
  double check_weight = 1.0 / 9.0;       // projection length 1/3, squared
  double almost_orthogonal = 1.0 / 30.0;  // projection length
  int closed_registers = 20;               // beta_j
  int closed_copies = 8;                   // readouts per beta_j
  double closed_rho = 1.0 / 20.0;          // S'
  double sig_rho = 0.5;                    // Sig cases 1) and 2)
  int gen_registers = 32;                  // y_j
  double change_rho = 5.0 / 32.0;
  double narrow_far = 0.75;  // Inv''_U: far fraction needed
  double ort_far = 0.5;      // Inv_U (ort variant): far fraction to exceed
  double gap_lo = 1.0 / 8.0, gap_hi = 7.0 / 32.0;
  int gap_retries = 3;
  InvBackend inv = InvBackend::Projector;
  StoppingPolicy stopping;

  void validate() const;
  /// Turn times are drawn from [0, ceil(2/d)].
  std::uint64_t turn_bound() const;
};

// Principal-angle picture of L^U and L^V.
struct Subspaces {
  Matrix u, v;            // orthonormal bases of L^U, L^V
  Matrix common;          // L_0
  Matrix prime;           // L' = span(L'_U, L'_V)
  Matrix u_principal;     // principal vectors of L^U, one per column
  Matrix v_principal;
  std::vector<double> u_cos;  // ||P_V u_i||; 0 for the columns beyond dim L^V
  std::vector<double> v_cos;
  double mu_u = 0.0, mu_v = 0.0;
  bool coincident = false;

  Eigen::Index dim_u() const { return u.cols(); }
  Eigen::Index dim_v() const { return v.cols(); }
  bool distinguishable(double d) const;
  /// Principal vectors of L^U whose far fraction 1 - cos^2 passes the test.
  Matrix u_far(double far, bool strict) const;
  Matrix v_far(double far, bool strict) const;
};

Subspaces analyze_subspaces(const Matrix& bu, const Matrix& bv, double tol = 1e-9);

/// Eigenspace of dec at the grid cell of omega (circular distance < 1/(2M)).
Matrix cell_basis(const SpectralDecomposition& dec, double omega, int M);

// One pair (U, V) at a shared frequency. The algorithm side reaches U and V
// only through the black boxes; the exact spectra drive the simulation of
// measurement statistics.
class DistinguishCase {
 public:
  DistinguishCase(DevicePtr u, DevicePtr v, double omega, DistinguishOptions opt = {});

  const BlackBox& U() const { return *bu_; }
  const BlackBox& V() const { return *bv_; }
  double omega() const { return omega_; }
  const DistinguishOptions& options() const { return opt_; }
  Eigen::Index dim() const { return N_; }
  const Subspaces& subspaces() const { return sub_; }
  std::uint64_t queries_u() const { return cu_->get("U"); }
  std::uint64_t queries_v() const { return cv_->get("V"); }
  std::uint64_t queries() const { return queries_u() + queries_v(); }

  // Simulation side.
  void charge_u(std::uint64_t n) const { cu_->add("U", n); }
  void charge_v(std::uint64_t n) const { cv_->add("V", n); }
  /// Probability that one Rev copy of U (V) reads a value rounding to omega on the 1/M grid.
  double close_u(const Vector& a) const { return close(du_, close_mass_u_, a); }
  double close_v(const Vector& a) const { return close(dv_, close_mass_v_, a); }
  /// Reflection cost in queries: v copies of Rev and Rest.
  std::uint64_t reflection_cost() const;
  std::uint64_t rev_cost() const { return static_cast<std::uint64_t>(opt_.L - 1); }

 private:
  static double close(const SpectralDecomposition& dec, const std::vector<double>& mass, const Vector& a);

  double omega_;
  DistinguishOptions opt_;
  Eigen::Index N_ = 0;
  std::shared_ptr<QueryCounter> cu_, cv_;
  std::unique_ptr<BlackBox> bu_, bv_;
  SpectralDecomposition du_, dv_;
  std::vector<double> close_mass_u_, close_mass_v_;
  Subspaces sub_;
};

struct AncillaFlags {
  int alpha_u = 0, alpha_v = 0, alpha_ort = 0, alpha_dif = 0;
  int same_dim = 0, u_gt_v = 0, u_lt_v = 0, ort_u_gt_v = 0, ort_u_lt_v = 0;
  std::vector<int> beta;

  bool any_dif() const { return same_dim || u_gt_v || u_lt_v || ort_u_gt_v || ort_u_lt_v; }
  bool clean() const;  // every working ancilla is 0 (alpha_dif excluded)
};

/// (I_{L^U} I_{L^V})^t
Vector turn(const Vector& a, const DistinguishCase& c, std::uint64_t t);
/// Toggles alpha_u, alpha_v by projection weight >= check_weight; self-inverse.
void check(const Vector& a, const DistinguishCase& c, AncillaFlags& f);
/// Sign flip and alpha_ort when alpha_u != alpha_v and the projection onto
/// L(alpha_u, alpha_v) is shorter than almost_orthogonal.
Vector dist_ort(const Vector& a, const DistinguishCase& c, AncillaFlags& f);
/// As dist_ort without the sign.
Vector dist_ort_minus(const Vector& a, const DistinguishCase& c, AncillaFlags& f);

struct ClosedEvidence {
  std::vector<std::uint64_t> times;
  std::vector<int> beta;
  bool flipped = false;
};

/// D_1^-1..D_n^-1 S' D_n..D_1 on a normalized vector, flags from check/dist_ort.
Vector dist_closed(const Vector& a, const DistinguishCase& c, const AncillaFlags& f, const Rng& rng,
                   ClosedEvidence* ev = nullptr);
/// Check Dist-_ort Dist_closed Dist_ort Check. Projector backend: exactly I_{L'}.
Vector inv(const Vector& a, const DistinguishCase& c, const Rng& rng);

struct DifEvidence {
  std::string name;
  double fraction = 0.0;  // readouts of Z not rounding to 0 on the 1/M grid
  bool flag = false;
  bool in_gap = false;
  int retries = 0;
  double residual = 0.0;  // max ||y_j restored - y_j|| after the inverse half
};

DifEvidence dif_same_dim(const DistinguishCase& c, const Rng& rng);
/// Both variants for the larger side; empty when the dimensions agree.
std::vector<DifEvidence> dif_dim_mismatch(const DistinguishCase& c, const Rng& rng);

enum class Verdict { Same, Different, Indeterminate };
std::string to_string(Verdict v);

struct DifferenceReport {
  Verdict verdict = Verdict::Same;
  AncillaFlags flags;  // after Differ^-1
  std::vector<DifEvidence> evidence;
  Eigen::Index dim_u = 0, dim_v = 0;
  double mu_u = 0.0, mu_v = 0.0;
  std::uint64_t queries_u = 0, queries_v = 0;
  std::uint64_t seed = 0;
};

/// Differ^-1 SignDif Differ.
DifferenceReport difference(const DistinguishCase& c, const Rng& rng);
/// Sign variant: -a when the subspaces differ.
Vector difference_sign(const Vector& a, const DistinguishCase& c, const Rng& rng);

// Promise classes for fixtures.
enum class PromiseClass { Equal, EqualDim, NestedMismatch, AngledMismatch, Empty };
std::string to_string(PromiseClass p);
PromiseClass promise_class_from_string(const std::string& s);

struct PairFixture {
  Matrix u, v;
  PromiseClass kind = PromiseClass::Equal;
  double omega = 0.0;
};

/// n qubits; frequencies on the 1/M grid. EqualDim rotates one vector of L^U by
/// an angle with sine d; AngledMismatch uses sine 0.8 for L^V against L^U.
PairFixture make_pair_fixture(PromiseClass kind, int n, int M, int omega_l, double d, const Rng& rng);

struct DeviceSearchOptions {
  DistinguishOptions dist;
  std::vector<int> frequencies;  // grid indices checked; empty: all of 0..M-1
  int attempts = 4;
  bool controlled = true;  // compare |0><0| (x) 1 + |1><1| (x) U instead of U
  StoppingPolicy stopping;
};

/// |0><0| (x) 1 + |1><1| (x) U, control on the new top qubit.
DevicePtr controlled_device(const DevicePtr& u);

struct DeviceComparison {
  bool differ = false;
  bool indeterminate = false;
  std::uint64_t queries = 0;
};

/// Difference at every checked grid frequency; differ iff any reports different.
DeviceComparison compare_devices(const DevicePtr& u, const DevicePtr& v, const DeviceSearchOptions& opt,
                                 const Rng& rng);

struct DeviceReport {
  std::optional<std::uint64_t> code;  // index into the family
  std::uint64_t family = 0;
  int attempts = 0;
  std::vector<std::uint64_t> sampled;
  std::uint64_t marked_evaluations = 0;
  std::uint64_t verifications = 0;
  std::uint64_t queries = 0;
  std::uint64_t seed = 0;
};

/// Grover over the family with "same as U" as the marked predicate; samples
/// are re-checked before being returned.
DeviceReport recognize_device(const DevicePtr& u, const std::vector<DevicePtr>& family,
                              const DeviceSearchOptions& opt, const Rng& rng);

struct DeviceDecision {
  std::optional<std::uint64_t> code;
  int runs = 0;
  int found = 0;
  std::vector<DeviceReport> reports;
};

DeviceDecision recognize_device_majority(const DevicePtr& u, const std::vector<DevicePtr>& family, int runs,
                                         double rho, const DeviceSearchOptions& opt, const Rng& rng);

/// Involutions with spectrum {0, 1/2} from the involutive gate set, distinct
/// as operators, first `count` in code order.
std::vector<std::uint64_t> involutive_family(const CodeSpace& space, std::size_t count);

}  // namespace qrec
