#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

#include "qrec/fixtures.hpp"
#include "qrec/recognize.hpp"

using namespace qrec;

namespace {

double window_prob(double w, double center, int L) {
  double p = 0.0;
  for (int l = 0; l < L; ++l) {
    double d = std::fabs(double(l) / L - center);
    d = std::min(d, 1.0 - d);
    if (d <= 1.0 / L + 1e-12) p += oracle::fejer(w, l, L);
  }
  return p;
}

// probability that at least ceil(rho v) of v independent copies match
double flip_prob(double r, int v, double rho) {
  double p = 0.0;
  for (int k = 0; k <= v; ++k) {
    if (k < rho * v - 1e-12) continue;
    p += std::exp(std::lgamma(v + 1.0) - std::lgamma(k + 1.0) - std::lgamma(v - k + 1.0)) * std::pow(r, k) *
         std::pow(1 - r, v - k);
  }
  return p;
}

EigenQuery query(int l, int M, int h = 32) {
  EigenQuery q;
  q.M = M;
  q.L = 16 * M;
  q.omega_l = l;
  q.h = h;
  return q;
}

}  // namespace

TEST_CASE("query validation") {
  EigenQuery q = query(0, 4);
  CHECK_NOTHROW(q.validate());
  q.L = 32;
  CHECK_THROWS(q.validate());
  q = query(64, 4);
  CHECK_THROWS(q.validate());
  q = query(0, 4);
  q.v = 0;
  CHECK_THROWS(q.validate());
  CHECK(backend_from_string("circuit") == Backend::Circuit);
  CHECK(to_string(Backend::Projector) == "projector");
  CHECK_THROWS(backend_from_string("x"));
}

TEST_CASE("readout window is circular and one fine step wide") {
  EigenQuery q = query(0, 4);
  CHECK(readout_matches(q, 0));
  CHECK(readout_matches(q, 1));
  CHECK(readout_matches(q, 63));
  CHECK_FALSE(readout_matches(q, 2));
  CHECK_FALSE(readout_matches(q, 62));
}

TEST_CASE("identity accepts the zero frequency") {
  auto dev = make_matrix_device(Matrix::Identity(4, 4));
  Rng rng(1);
  auto rep = recognize_eigenvalue(query(0, 4), *dev, rng);
  CHECK(rep.verdict);
  CHECK(rep.fraction == 1.0);
  CHECK(rep.registers.size() == 32);
}

TEST_CASE("spectrum {0, 1/2} rejects 1/4") {
  Rng base(2);
  int rejects = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng r = base.stream("trial", trial);
    Rng fr = r.stream("fixture");
    const Matrix u = unitary_with_spectrum(fr, {0.0, 0.0, 0.5, 0.5});
    auto dev = make_matrix_device(u);
    auto rep = recognize_eigenvalue(query(16, 4), *dev, r.stream("run"));
    rejects += !rep.verdict;
    // rank-0 projector and on-grid frequencies: no mass in the window at all
    for (const auto& reg : rep.registers) CHECK(reg.match_mass < 1e-12);
  }
  CHECK(rejects >= 198);
}

TEST_CASE("spectrum {0, 1/4, 1/2} accepts 1/4 with h = 32") {
  Rng base(3);
  int accepts = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    Rng r = base.stream("trial", trial);
    Rng fr = r.stream("fixture");
    const Matrix u = unitary_with_spectrum(fr, {0.0, 0.0, 0.0, 0.25, 0.5, 0.5, 0.5, 0.5});
    auto dev = make_matrix_device(u);
    auto rep = recognize_eigenvalue(query(32, 8), *dev, r.stream("run"));
    accepts += rep.verdict;
  }
  CHECK(accepts >= 198);
}

TEST_CASE("projector reflection flips E and fixes its complement") {
  Rng rng(4);
  Rng fr = rng.stream("fixture");
  const Matrix u = unitary_with_spectrum(fr, {0.0, 0.5, 0.5, 0.0});
  auto dev = make_matrix_device(u);
  const EigenQuery q = query(0, 4);
  const SpectralOracle orc = SpectralOracle::from_matrix(u, 4, 64);
  const Matrix b = orc.eigenspace_basis(0.0);
  REQUIRE(b.cols() == 2);
  RegisterLayout lay{{"x", 2}};
  const Vector in = b.col(0);
  auto s = StateVector::from_amplitudes(lay, in);
  reflect_eigenspace_inplace(s, q, *dev, &orc);
  CHECK((s.amplitudes() + in).norm() < 1e-12);
  const Vector out = orc.eigenspace_basis(0.5).col(1);
  auto t = StateVector::from_amplitudes(lay, out);
  reflect_eigenspace_inplace(t, q, *dev, &orc);
  CHECK((t.amplitudes() - out).norm() < 1e-12);
  CHECK_THROWS(reflect_eigenspace_inplace(t, q, *dev, nullptr));
}

TEST_CASE("state concentrate overlaps") {
  Rng rng(5);
  SUBCASE("single frequency: E is everything") {
    const Matrix u = std::polar(1.0, 2 * M_PI * 0.25) * Matrix::Identity(8, 8);
    auto dev = make_matrix_device(u);
    auto res = state_concentrate(query(16, 4, 8), *dev, rng);
    for (double o : res.overlaps) CHECK(o == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("not a frequency: rank zero") {
    Rng fr = rng.stream("fx");
    const Matrix u = unitary_with_spectrum(fr, {0.0, 0.5, 0.5, 0.0});
    auto dev = make_matrix_device(u);
    auto res = state_concentrate(query(16, 4, 8), *dev, rng);
    for (double o : res.overlaps) CHECK(o == 0.0);
  }
  SUBCASE("N=16, dim E = 1: rotation law and mean over t at least a quarter") {
    Rng fr = rng.stream("fx16");
    std::vector<double> w(16, 0.5);
    w[3] = 0.0;
    const Matrix u = unitary_with_spectrum(fr, w);
    auto dev = make_matrix_device(u);
    const EigenQuery q = query(0, 4, 64);
    const SpectralOracle orc = SpectralOracle::from_matrix(u, 4, 64);
    const Matrix b = orc.eigenspace_basis(0.0);
    REQUIRE(b.cols() == 1);
    auto res = state_concentrate(q, *dev, rng, &orc);
    const int B = static_cast<int>(std::ceil(2.0 * std::sqrt(16.0)));
    double mean_avg = 0.0;
    for (int k = 0; k < q.h; ++k) {
      Rng ar = rng.stream("genarg", static_cast<std::uint64_t>(k));
      const Vector a = haar_vector(ar, 16);
      const double th = std::asin(std::abs(b.col(0).dot(a)));
      const double want = std::pow(std::sin((2.0 * res.times[k] + 1) * th), 2);
      CHECK(res.overlaps[k] == doctest::Approx(want).epsilon(1e-9));
      double avg = 0.0;
      for (int t = 0; t <= B; ++t) avg += std::pow(std::sin((2.0 * t + 1) * th), 2);
      mean_avg += avg / (B + 1);
    }
    CHECK(mean_avg / q.h >= 0.25);
  }
}

TEST_CASE("completeness/soundness gap of the per-register match mass") {
  Rng rng(6);
  double in_mass = 0.0, out_mass = 0.0;
  int regs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng r = rng.stream("t", trial);
    Rng fr = r.stream("fx");
    SparseSpectrumOptions opt;
    opt.groups = 2;
    auto fx = random_sparse_unitary(fr, 3, 4, 64, opt);
    SpectralOracle orc{fx.dec, fx.profile};
    auto dev = make_matrix_device(fx.u);
    const int anchor = fx.profile.groups[0].anchor;
    // nearest fine-grid point to the group frequency
    const int l = static_cast<int>(std::lround(fx.profile.groups[0].frequencies[0] * 64)) % 64;
    auto yes = recognize_eigenvalue(query(l, 4, 16), *dev, r.stream("yes"), &orc);
    // an empty coarse slot between the two (even) anchors
    auto no = recognize_eigenvalue(query(((anchor + 1) % 4) * 16, 4, 16), *dev, r.stream("no"), &orc);
    for (const auto& reg : yes.registers) in_mass += reg.match_mass;
    for (const auto& reg : no.registers) out_mass += reg.match_mass;
    regs += 16;
  }
  MESSAGE("mean match mass: frequency " << in_mass / regs << ", not a frequency " << out_mass / regs);
  CHECK(in_mass / regs >= 7.0 / 32.0);
  CHECK(out_mass / regs < 0.02);
  CHECK(out_mass / regs < 5.0 / 32.0);
}

TEST_CASE("circuit reflection against the exact per-eigenvector oracle") {
  Rng rng(7);
  Rng fr = rng.stream("fx");
  SparseSpectrumOptions opt;
  opt.offset_scale = 0.5;
  auto fx = random_sparse_unitary(fr, 2, 4, 64, opt);
  SpectralOracle orc{fx.dec, fx.profile};
  auto dev = make_matrix_device(fx.u);
  EigenQuery q = query(fx.profile.groups[0].anchor * 16, 4);
  const Matrix b = orc.eigenspace_basis(q.omega());
  Rng ar = rng.stream("a");
  const Vector a = haar_vector(ar, 4);
  Vector e = b * (b.adjoint() * a);
  e /= e.norm();
  Vector e2 = e - a * a.dot(e);
  e2 /= e2.norm();

  std::vector<double> diffs;
  for (int v = 1; v <= 3; ++v) {
    q.v = v;
    Matrix D(Eigen::Index{4} << (6 * v), 2);
    int c = 0;
    for (const Vector& x : {a, e2}) {
      auto s = StateVector::product(reflection_layout(2, q), {{"x", x}});
      q.backend = Backend::Circuit;
      reflect_eigenspace_inplace(s, q, *dev, &orc);
      auto t = StateVector::product(reflection_layout(2, q), {{"x", x}});
      q.backend = Backend::Projector;
      reflect_eigenspace_inplace(t, q, *dev, &orc);
      D.col(c++) = s.amplitudes() - t.amplitudes();
    }
    // oracle: on an eigenvector of frequency w the error has squared norm
    // 2 - 2 s (1 - 2 P_flip(w)), s = -1 inside E, +1 outside
    Eigen::Matrix2cd G = Eigen::Matrix2cd::Zero();
    for (std::size_t i = 0; i < fx.dec.spaces.size(); ++i) {
      const auto& sp = fx.dec.spaces[i];
      const bool in = fx.profile.group_near(q.omega()) &&
                      std::abs(circular_distance(sp.omega, q.omega())) < 1.0 / 64 + 1e-12;
      const double pf = flip_prob(window_prob(sp.omega, q.omega(), 64), v, q.sign_rho);
      const double sgn = in ? -1.0 : 1.0;
      const double err2 = 2.0 - 2.0 * sgn * (1.0 - 2.0 * pf);
      Eigen::Matrix<Complex, Eigen::Dynamic, 2> alpha(sp.basis.cols(), 2);
      alpha.col(0) = sp.basis.adjoint() * a;
      alpha.col(1) = sp.basis.adjoint() * e2;
      G += err2 * alpha.adjoint() * alpha;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(G);
    const double want = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    Eigen::JacobiSVD<Matrix> svd(D);
    const double got = svd.singularValues()[0];
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
    diffs.push_back(got);
  }
  MESSAGE("backend difference on S(a, w) for v = 1, 2, 3: " << diffs[0] << " " << diffs[1] << " " << diffs[2]);
  CHECK(diffs[1] < diffs[0]);
  CHECK(diffs[2] < diffs[0]);
}

TEST_CASE("backends agree and circuit query count matches the formula") {
  Rng rng(8);
  for (int c = 0; c < 4; ++c) {
    Rng r = rng.stream("case", c);
    Rng fr = r.stream("fx");
    SparseSpectrumOptions opt;
    opt.offset_scale = 0.5;
    auto fx = random_sparse_unitary(fr, 2, 4, 64, opt);
    SpectralOracle orc{fx.dec, fx.profile};
    auto dev = make_matrix_device(fx.u);
    EigenQuery q = query((fx.profile.groups[c % 2].anchor * 16 + (c / 2) * 16) % 64, 4, 3);
    auto a = recognize_eigenvalue(q, *dev, r.stream("run"), &orc);
    q.backend = Backend::Circuit;
    auto counter = std::make_shared<QueryCounter>();
    BlackBox bb(dev, counter);
    q.rest = RestKind::Turning;
    CHECK_THROWS(recognize_eigenvalue(q, bb, r.stream("run")));
    q.rest = RestKind::Inverse;
    auto b = recognize_eigenvalue(q, *dev, r.stream("run"), &orc);
    CHECK(a.verdict == b.verdict);
    CHECK(a.queries == b.queries);
    std::vector<std::uint64_t> times;
    for (const auto& reg : b.registers) times.push_back(reg.t);
    CHECK(b.queries == recognition_queries(q, times));
    for (int k = 0; k < q.h; ++k) {
      double tv = 0.0;
      for (int l = 0; l < 64; ++l) tv += std::fabs(a.registers[k].readout_dist[l] - b.registers[k].readout_dist[l]);
      CHECK(tv / 2 <= 0.05);
      CHECK(a.registers[k].overlap == doctest::Approx(b.registers[k].overlap).epsilon(0.05));
    }
  }
}

TEST_CASE("black box with turning restoration runs on the circuit backend") {
  Rng rng(9);
  Rng fr = rng.stream("fx");
  auto fx = random_sparse_unitary(fr, 2, 4, 64);
  SpectralOracle orc{fx.dec, fx.profile};
  auto counter = std::make_shared<QueryCounter>();
  BlackBox bb(make_matrix_device(fx.u), counter);
  EigenQuery q = query(fx.profile.groups[0].anchor * 16, 4, 2);
  q.backend = Backend::Circuit;
  q.rest = RestKind::Turning;
  auto rep = recognize_eigenvalue(q, bb, rng, &orc);
  CHECK(rep.queries > 0);
  q.rest = RestKind::Inverse;
  CHECK_THROWS_AS(recognize_eigenvalue(q, bb, rng, &orc), BlackBoxViolation);
}

TEST_CASE("circuit backend over the width cap") {
  auto dev = make_matrix_device(Matrix::Identity(8, 8));
  EigenQuery q = query(0, 8, 2);
  q.v = 4;
  q.backend = Backend::Circuit;
  Rng rng(10);
  CHECK_THROWS_AS(state_concentrate(q, *dev, rng), DimensionError);
}
