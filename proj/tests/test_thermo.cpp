#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qrec/fixtures.hpp"
#include "qrec/thermo.hpp"

using namespace qrec;

namespace {

struct Exact {
  double Q = 0, E = 0, S = 0;
};

// direct summation over every eigenvalue
Exact exact(const std::vector<double>& ev, double kbt) {
  Exact x;
  for (double e : ev) x.Q += std::exp(-e / kbt);
  for (double e : ev) {
    const double p = std::exp(-e / kbt) / x.Q;
    x.E += e * p;
    x.S -= p * std::log(p);
  }
  return x;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("hamiltonian spec validation") {
  CHECK_THROWS(HamiltonianSpec::from_levels({}));
  CHECK_THROWS(HamiltonianSpec::from_levels({{1, 1}, {0, 1}}));
  CHECK_THROWS(HamiltonianSpec::from_levels({{0, 1}, {1, 2}}));  // 3 states
  CHECK_THROWS(HamiltonianSpec::from_levels({{0, 0}, {1, 2}}));
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = 1.0;
  CHECK_THROWS(HamiltonianSpec::from_matrix(h));
  auto s = HamiltonianSpec::from_levels({{0, 1}, {2, 3}});
  CHECK(s.dim() == 4);
  Rng rng(1);
  const Matrix m = s.to_matrix(rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[3] == doctest::Approx(2.0));
}

TEST_CASE("rescaling") {
  SUBCASE("H = 0 gives the identity") {
    auto r = rescale_to_unitary(Matrix::Zero(4, 4));
    CHECK(r.single_level);
    CHECK((r.u - Matrix::Identity(4, 4)).norm() < 1e-12);
  }
  SUBCASE("two levels: scalar exponentiation on each eigenvector") {
    Rng rng(2);
    const Matrix h = HamiltonianSpec::from_levels({{0.0, 1}, {1.0, 1}}).to_matrix(rng);
    auto r = rescale_to_unitary(h, 0.75);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const double W = 1.0 / 0.75;
    for (int k = 0; k < 2; ++k) {
      const double e = es.eigenvalues()[k];
      const double f = (1.0 - e) / W;  // top level 1
      const Vector v = es.eigenvectors().col(k);
      const Vector uv = r.u * v;
      CHECK((uv - std::polar(1.0, 2 * M_PI * f) * v).norm() < 1e-10);
      CHECK(r.map.frequency(e) == doctest::Approx(f - std::floor(f)).epsilon(1e-12));
    }
    CHECK(wrap_unit(r.map.frequency(1.0) - r.map.frequency(0.0)) == doctest::Approx(0.25));
  }
  SUBCASE("energy round trip") {
    FrequencyMap m{3.5, 2.0};
    for (double e : {2.0, 2.3, 3.0, 3.5}) CHECK(m.energy(m.frequency(e)) == doctest::Approx(e).epsilon(1e-9));
  }
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 0) = 1.0;
  CHECK_THROWS(rescale_to_unitary(bad));
}

TEST_CASE("anchor frequencies") {
  ThermoOptions opt;
  opt.M = 4;
  Rng rng(3);
  SUBCASE("identity: only l = 0") {
    auto u = make_matrix_device(Matrix::Identity(4, 4));
    const auto orc = SpectralOracle::from_matrix(Matrix::Identity(4, 4), 4, 64);
    auto acc = find_anchor_frequencies(*u, orc, opt, rng);
    REQUIRE(acc.size() == 1);
    CHECK(acc[0].query.omega_l == 0);
  }
  SUBCASE("spectrum {0, 1/2}: anchors 0 and 2, nothing at 1") {
    const Matrix m = unitary_with_spectrum(rng, {0.0, 0.5, 0.5, 0.0, 0.0, 0.5, 0.0, 0.5});
    auto u = make_matrix_device(m);
    const auto orc = SpectralOracle::from_matrix(m, 4, 64);
    auto acc = find_anchor_frequencies(*u, orc, opt, rng);
    REQUIRE(acc.size() == 2);
    CHECK(acc[0].query.omega_l == 0);
    CHECK(acc[1].query.omega_l == 32);
  }
}

TEST_CASE("degeneracy counting on the eigenspace") {
  Rng rng(4);
  SUBCASE("full space") {
    const auto orc = SpectralOracle::from_matrix(Matrix::Identity(16, 16), 4, 64);
    CHECK(degeneracy(orc, 0.0, 0.1, rng).d_hat == 16);
  }
  SUBCASE("d = 2 at N = 32") {
    std::vector<double> w(32, 0.5);
    w[4] = w[9] = 0.0;
    const Matrix m = unitary_with_spectrum(rng, w);
    const auto orc = SpectralOracle::from_matrix(m, 4, 64);
    auto c = degeneracy(orc, 0.0, 0.1, rng);
    CHECK(c.bracket_lo <= 2.0);
    CHECK(c.bracket_hi >= 2.0);
    CHECK(c.d_hat == 2);
  }
  SUBCASE("d = 8, eps = 0.05") {
    std::vector<double> w(32, 0.0);
    for (int i = 0; i < 8; ++i) w[i * 3] = 0.5;
    const Matrix m = unitary_with_spectrum(rng, w);
    const auto orc = SpectralOracle::from_matrix(m, 4, 64);
    REQUIRE(orc.eigenspace_basis(0.5).cols() == 8);
    auto c = degeneracy(orc, 0.5, 0.05, rng);
    CHECK(std::abs(c.d_hat - 8) <= calibrated_error(0.05) * 8);
  }
}

TEST_CASE("thermodynamic functions") {
  auto one = thermo_functions({{0.0, 1}}, 1.0);
  CHECK(one.Q == 1.0);
  CHECK(one.mean_energy == 0.0);
  CHECK(one.entropy == doctest::Approx(0.0));

  auto two = thermo_functions({{1.0, 1}, {0.0, 2}}, 1.0);
  CHECK(two.Q == doctest::Approx(2.0 + std::exp(-1.0)).epsilon(1e-14));
  CHECK(two.levels.front().energy == 0.0);

  std::vector<Level> lv = {{0.0, 1}, {1.0, 3}, {2.0, 4}, {3.0, 8}};
  auto hot = thermo_functions(lv, 1e3 * 3.0);
  CHECK(rel(hot.entropy, std::log(16.0)) < 0.01);

  // S = <E>/kT + ln Q
  for (double kbt : {0.3, 1.0, 4.0}) {
    auto r = thermo_functions(lv, kbt);
    CHECK(r.entropy == doctest::Approx(r.mean_energy / kbt + std::log(r.Q)).epsilon(1e-12));
    CHECK(r.Q > 0);
    CHECK(r.entropy >= 0);
    CHECK(r.mean_energy >= 0.0);
    CHECK(r.mean_energy <= 3.0);
  }
  // Q strictly decreasing in 1/kT
  double prev = INFINITY;
  for (double beta = 0.1; beta < 5; beta += 0.3) {
    const double q = thermo_functions(lv, 1.0 / beta).Q;
    CHECK(q < prev);
    prev = q;
  }
  auto cut = thermo_functions(lv, 1.0, 2);
  CHECK(cut.levels.size() == 2);
  CHECK(cut.truncation_bound == doctest::Approx(4 * std::exp(-2.0) / (1 + 3 * std::exp(-1.0))));
  CHECK_THROWS(thermo_functions({}, 1.0));
  CHECK_THROWS(thermo_functions(lv, 0.0));
}

TEST_CASE("end to end against exact diagonalization") {
  const std::vector<std::vector<Level>> fixtures = {
      {{0, 1}, {1, 3}, {2, 4}, {3, 8}},
      {{0, 2}, {1, 6}, {1.004, 2}, {2, 6}, {3, 16}},
      {{0.2, 1}, {0.7, 7}, {1.2, 24}, {1.7, 32}},
  };
  Rng rng(5);
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto h = HamiltonianSpec::from_levels(fixtures[i]);
    const double Es = fixtures[i].back().energy;
    auto rep = run_thermo(h, {0.5 * Es, Es, 2 * Es}, {}, rng.stream("fixture", i));
    CHECK(rep.queries > 0);
    for (const auto& l : rep.levels) {
      // the true degeneracy of the group this level belongs to
      int d = 0;
      for (const auto& f : fixtures[i])
        if (std::fabs(f.energy - l.energy) < 0.01) d += f.degeneracy;
      CHECK(l.bracket_lo <= d);
      CHECK(l.bracket_hi >= d);
    }
    for (const auto& r : rep.results) {
      const Exact x = exact(h.eigenvalues(), r.kbt);
      CHECK(rel(r.Q, x.Q) < 0.05);
      CHECK(rel(r.mean_energy, x.E) < 0.05);
      CHECK(rel(r.entropy, x.S) < 0.05);
    }
  }
}

TEST_CASE("single level bypasses recognition") {
  auto h = HamiltonianSpec::from_levels({{1.5, 8}});
  Rng rng(6);
  auto rep = run_thermo(h, {1.0}, {}, rng);
  REQUIRE(rep.levels.size() == 1);
  CHECK(rep.levels[0].degeneracy == 8);
  CHECK(rep.queries == 0);
  CHECK(rep.results[0].Q == doctest::Approx(8 * std::exp(-1.5)));
}

TEST_CASE("weight cutoff drops negligible levels") {
  auto h = HamiltonianSpec::from_levels({{0, 1}, {1, 1}, {2, 2}, {3, 4}});
  ThermoOptions opt;
  Rng rng(7);
  auto rep = run_thermo(h, {0.17}, opt, rng);
  CHECK(rep.levels.size() == 4);
  CHECK(rep.results[0].levels.size() == 3);
  CHECK(rep.results[0].truncation_bound > 0.0);
  CHECK(rep.results[0].truncation_bound < 1e-6);
}
