#include "qrec/amplify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

namespace qrec {

ReflectionSpec ReflectionSpec::basis_state(std::uint64_t index) {
  ReflectionSpec r;
  r.kind_ = Kind::Basis;
  r.index_ = index;
  return r;
}

ReflectionSpec ReflectionSpec::predicate(std::function<bool(std::uint64_t)> marked) {
  ReflectionSpec r;
  r.kind_ = Kind::Predicate;
  r.pred_ = std::move(marked);
  return r;
}

ReflectionSpec ReflectionSpec::projector(Matrix basis) {
  if (basis.cols() > 0) {
    const Matrix g = basis.adjoint() * basis;
    if ((g - Matrix::Identity(g.rows(), g.cols())).norm() > 1e-8)
      throw std::invalid_argument("projector basis is not orthonormal");
  }
  ReflectionSpec r;
  r.kind_ = Kind::Projector;
  r.basis_ = std::move(basis);
  return r;
}

ReflectionSpec ReflectionSpec::along(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) return none();
  Matrix b(v.size(), 1);
  b.col(0) = v / n;
  return projector(std::move(b));
}

ReflectionSpec ReflectionSpec::none() { return predicate([](std::uint64_t) { return false; }); }

void ReflectionSpec::apply(Vector& x) const {
  switch (kind_) {
    case Kind::Basis:
      if (index_ >= static_cast<std::uint64_t>(x.size())) throw DimensionError("marked index out of range");
      x[static_cast<Eigen::Index>(index_)] = -x[static_cast<Eigen::Index>(index_)];
      return;
    case Kind::Predicate:
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (pred_(static_cast<std::uint64_t>(i))) x[i] = -x[i];
      return;
    case Kind::Projector: {
      if (basis_.cols() == 0) return;
      if (basis_.rows() != x.size()) throw DimensionError("projector dimension mismatch");
      const Vector c = basis_.adjoint() * x;
      x.noalias() -= 2.0 * (basis_ * c);
      return;
    }
  }
}

double ReflectionSpec::weight(const Vector& x) const {
  switch (kind_) {
    case Kind::Basis:
      return index_ < static_cast<std::uint64_t>(x.size()) ? std::norm(x[static_cast<Eigen::Index>(index_)]) : 0.0;
    case Kind::Predicate: {
      double w = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (pred_(static_cast<std::uint64_t>(i))) w += std::norm(x[i]);
      return w;
    }
    case Kind::Projector:
      if (basis_.cols() == 0) return 0.0;
      return (basis_.adjoint() * x).squaredNorm();
  }
  return 0.0;
}

Matrix ReflectionSpec::matrix(Eigen::Index dim) const {
  Matrix m = Matrix::Identity(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Vector col = m.col(c);
    apply(col);
    m.col(c) = col;
  }
  return m;
}

Vector grover_iterate(const Vector& state, const ReflectionSpec& marked, const ReflectionSpec& start,
                      std::uint64_t t) {
  Vector x = state;
  for (std::uint64_t i = 0; i < t; ++i) {
    marked.apply(x);
    start.apply(x);
  }
  return x;
}

StateVector grover_iterate(const StateVector& state, const ReflectionSpec& marked, const ReflectionSpec& start,
                           std::uint64_t t) {
  return StateVector::from_amplitudes(state.layout(), grover_iterate(state.amplitudes(), marked, start, t));
}

std::uint64_t StoppingPolicy::bound(std::uint64_t N) const {
  if (!(beta > 0.0)) throw std::invalid_argument("stopping policy beta must be positive");
  return static_cast<std::uint64_t>(std::ceil(beta * std::sqrt(static_cast<double>(N))));
}

namespace {

Vector uniform_vector(std::uint64_t N) {
  return Vector::Constant(static_cast<Eigen::Index>(N), Complex(1.0 / std::sqrt(static_cast<double>(N))));
}

}  // namespace

double mean_success_probability(std::uint64_t N, const std::function<bool(std::uint64_t)>& marked,
                                const StoppingPolicy& policy) {
  if (N == 0) throw std::invalid_argument("empty search space");
  const ReflectionSpec mk = ReflectionSpec::predicate(marked);
  const Vector s = uniform_vector(N);
  const ReflectionSpec st = ReflectionSpec::along(s);
  const std::uint64_t B = policy.bound(N);
  Vector x = s;
  double acc = mk.weight(x);
  for (std::uint64_t t = 1; t <= B; ++t) {
    mk.apply(x);
    st.apply(x);
    acc += mk.weight(x);
  }
  return acc / static_cast<double>(B + 1);
}

SearchSample random_time_search(const std::function<bool(std::uint64_t)>& marked, std::uint64_t N,
                                const StoppingPolicy& policy, Rng& rng, StartKind start, QueryCounter* counter) {
  if (N == 0) throw std::invalid_argument("empty search space");
  const std::uint64_t B = policy.bound(N);
  Rng trng = rng.stream("time");
  Rng srng = rng.stream("start");
  Rng mrng = rng.stream("measure");
  const std::uint64_t t = trng.uniform_int(0, B);
  const Vector s = start == StartKind::Uniform ? uniform_vector(N) : haar_vector(srng, static_cast<Eigen::Index>(N));
  const Vector x = grover_iterate(s, ReflectionSpec::predicate(marked), ReflectionSpec::along(s), t);
  if (counter) counter->add("marked", t);
  std::vector<double> p(N);
  for (std::uint64_t i = 0; i < N; ++i) p[i] = std::norm(x[static_cast<Eigen::Index>(i)]);
  return {sample_index(p, mrng.uniform()), t};
}

MajorityDecision decide_majority(std::vector<std::uint64_t> votes, double rho) {
  MajorityDecision d;
  d.k = static_cast<int>(votes.size());
  d.rho = rho;
  std::map<std::uint64_t, int> tally;
  for (auto v : votes) ++tally[v];
  d.votes = std::move(votes);
  int best = 0, second = 0;
  std::uint64_t arg = 0;
  for (const auto& [v, c] : tally) {
    if (c > best) {
      second = best;
      best = c;
      arg = v;
    } else if (c > second) {
      second = c;
    }
  }
  d.support = best;
  const double need = rho * d.k;
  if (best > 0 && best >= need - 1e-12 && !(second == best)) d.value = arg;
  return d;
}

MajorityDecision majority_search(const std::function<bool(std::uint64_t)>& marked, std::uint64_t N, int k,
                                 double rho, Rng& rng, const StoppingPolicy& policy, StartKind start,
                                 QueryCounter* counter) {
  if (k < 1) throw std::invalid_argument("majority_search needs k >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("majority threshold must lie in (0, 1)");
  std::vector<std::uint64_t> votes;
  votes.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    Rng r = rng.stream("register", static_cast<std::uint64_t>(j));
    votes.push_back(random_time_search(marked, N, policy, r, start, counter).outcome);
  }
  return decide_majority(std::move(votes), rho);
}

// ---- counting ------------------------------------------------------------

namespace {

// mean over t in {0..h} of sin^2((2t+1) theta)
double averaged_sin2(double theta, int h) {
  const double s2 = std::sin(2.0 * theta);
  const double m = 4.0 * (h + 1);
  if (std::fabs(s2) > 1e-6) return 0.5 - std::sin(m * theta) / (m * s2);
  double acc = 0.0;
  for (int t = 0; t <= h; ++t) {
    const double s = std::sin((2.0 * t + 1.0) * theta);
    acc += s * s;
  }
  return acc / (h + 1);
}

}  // namespace

double fidelity_model(int N, int d, int h) {
  if (N < 1 || d < 0 || d > N || h < 0) throw std::invalid_argument("fidelity_model: bad arguments");
  if (d == 0) return 0.0;
  if (d == N) return 1.0;
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({N, d, h}); it != cache.end()) return it->second;
  }
  // |P_E a|^2 of a Haar vector is Beta(d, N - d).
  const double a = d, b = N - d;
  const double lognorm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto f = [&](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double dens = std::exp(lognorm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    return dens * averaged_sin2(std::asin(std::sqrt(x)), h);
  };
  constexpr int kPieces = 400;
  double total = 0.0;
  for (int i = 0; i < kPieces; ++i)
    total += boost::math::quadrature::gauss<double, 15>::integrate(f, double(i) / kPieces, double(i + 1) / kPieces);
  std::lock_guard<std::mutex> lock(mu);
  cache[{N, d, h}] = total;
  return total;
}

namespace {

struct Probe {
  int h;
  double f;
};

int fit_dimension(int N, const std::vector<Probe>& data) {
  int best = 0;
  double best_err = INFINITY;
  for (int d = 0; d <= N; ++d) {
    double err = 0.0;
    for (const auto& p : data) {
      const double r = p.f - fidelity_model(N, d, p.h);
      err += r * r;
    }
    if (err < best_err) {
      best_err = err;
      best = d;
    }
  }
  return best;
}

// One register: fixed Haar start a_j, fixed time fraction u_j; the fidelity
// trajectory ||P_E xi_t||^2 is extended lazily.
class RegisterBank {
 public:
  RegisterBank(const Matrix& basis, int J, Rng& rng) : reflect_(ReflectionSpec::projector(basis)) {
    const Eigen::Index N = basis.rows();
    regs_.reserve(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
      Rng ar = rng.stream("genarg", static_cast<std::uint64_t>(j));
      Rng tr = rng.stream("time", static_cast<std::uint64_t>(j));
      Reg r;
      r.a = haar_vector(ar, N);
      r.x = r.a;
      r.u = tr.uniform();
      r.w.push_back(reflect_.weight(r.x));
      regs_.push_back(std::move(r));
    }
  }

  // mean fidelity with t_j = floor(u_j (h+1)); adds sum t_j to reflections
  double fidelity(int h, std::uint64_t& reflections) {
    double acc = 0.0;
    for (auto& r : regs_) {
      const int t = std::min(h, static_cast<int>(std::floor(r.u * (h + 1))));
      while (static_cast<int>(r.w.size()) <= t) {
        reflect_.apply(r.x);
        const Complex ov = r.a.dot(r.x);
        r.x -= 2.0 * ov * r.a;
        r.w.push_back(reflect_.weight(r.x));
      }
      acc += r.w[static_cast<std::size_t>(t)];
      reflections += static_cast<std::uint64_t>(t);
    }
    return acc / static_cast<double>(regs_.size());
  }

 private:
  struct Reg {
    Vector a, x;
    double u = 0.0;
    std::vector<double> w;
  };
  ReflectionSpec reflect_;
  std::vector<Reg> regs_;
};

}  // namespace

CountResult count_rotation_time(const Matrix& basis, double eps, Rng& rng, const CountOptions& opt) {
  const int N = static_cast<int>(basis.rows());
  if (N < 1) throw std::invalid_argument("count_rotation_time: empty space");
  if (!(eps > 0.0 && eps < 0.125)) throw std::invalid_argument("count_rotation_time: eps must lie in (0, 1/8)");
  if (opt.registers < 1) throw std::invalid_argument("count_rotation_time: need at least one register");
  RegisterBank bank(basis, opt.registers, rng);
  CountResult res;
  std::vector<Probe> data;

  const int cap = static_cast<int>(std::ceil(opt.horizon_factor * std::sqrt(double(N))));
  double prev = bank.fidelity(0, res.reflections);
  data.push_back({0, prev});
  res.sweep.emplace_back(0, prev);
  res.stopped_by_rule = false;
  double a = 1.0;
  while (true) {
    const int h = static_cast<int>(std::floor(a));
    const double f = bank.fidelity(h, res.reflections);
    data.push_back({h, f});
    res.sweep.emplace_back(h, f);
    if (f <= prev) {
      res.stopped_by_rule = true;
      break;
    }
    if (h >= cap) break;
    prev = f;
    a = std::max(4.0 * a / 3.0, std::floor(a) + 1.0);
  }
  res.rough = fit_dimension(N, data);

  double A = 1.0;
  while (A < res.rough) A *= 4.0 / 3.0;
  res.bracket_hi = A;
  res.bracket_lo = 3.0 * A / 4.0;

  if (res.rough > 0 && res.rough < N) {
    const int parts = static_cast<int>(std::ceil(1.0 / eps));
    std::vector<int> horizons;
    for (int i = 0; i <= parts; ++i) {
      const double ai = std::min<double>(N, res.bracket_lo + (res.bracket_hi - res.bracket_lo) * i / parts);
      const double th = std::asin(std::sqrt(std::max(ai, 1e-9) / N));
      const int h = std::max(1, static_cast<int>(std::lround(M_PI / (4.0 * th) - 0.5)));
      if (std::find(horizons.begin(), horizons.end(), h) == horizons.end()) horizons.push_back(h);
    }
    for (int h : horizons) {
      const double f = bank.fidelity(h, res.reflections);
      data.push_back({h, f});
      res.probes.emplace_back(h, f);
    }
    res.d_hat = fit_dimension(N, data);
  } else {
    res.d_hat = res.rough;
  }
  return res;
}

CountResult count_rotation_time(const ReflectionSpec& reflection, std::uint64_t N, double eps, Rng& rng,
                                const CountOptions& opt) {
  if (reflection.kind() == ReflectionSpec::Kind::Projector)
    return count_rotation_time(reflection.basis(), eps, rng, opt);
  std::vector<Eigen::Index> marked;
  for (std::uint64_t i = 0; i < N; ++i) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(N));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    if (reflection.weight(e) > 0.5) marked.push_back(static_cast<Eigen::Index>(i));
  }
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(marked.size()));
  for (std::size_t c = 0; c < marked.size(); ++c) b(marked[c], static_cast<Eigen::Index>(c)) = 1.0;
  return count_rotation_time(b, eps, rng, opt);
}

double calibrated_error(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("calibrated_error: eps must be positive");
  return std::min(1.0, 2.5 * eps);
}

}  // namespace qrec
