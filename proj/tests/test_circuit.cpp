#include "doctest.h"
#include "oracles.hpp"

#include <set>

#include "qrec/device.hpp"

using namespace qrec;

TEST_CASE("empty circuit is code 0") {
  CodeSpace space(GateSet::standard(), 2, 2);
  CHECK(space.encode(Circuit{2, {}}) == 0);
  CHECK(space.decode(0).gates.empty());
}

TEST_CASE("code count with two single-qubit gates, n=1, c=2") {
  GateSet gs("pair", {{"X", 1, GateSet::standard()[2].unitary}, {"H", 1, GateSet::standard()[0].unitary}});
  CodeSpace space(gs, 1, 2);
  CHECK(space.size() == 7);
  // exhaustive: every length <= 2 sequence appears exactly once
  std::set<std::vector<int>> seen;
  for (std::uint64_t code = 0; code < space.size(); ++code) {
    std::vector<int> seq;
    for (const auto& g : space.decode(code).gates) seq.push_back(g.gate);
    seen.insert(seq);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(space.decode(7), std::out_of_range);
}

TEST_CASE("encode/decode round trip") {
  CodeSpace space(GateSet::standard(), 3, 3);
  Rng rng(1);
  const std::uint64_t A = space.actions();
  CHECK(A == 3 * 3 + 6);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t code = rng.uniform_int(0, space.size() - 1);
    CHECK(space.encode(space.decode(code)) == code);
    // random circuit round trip
    Circuit c{3, {}};
    const int len = static_cast<int>(rng.uniform_int(0, 3));
    for (int k = 0; k < len; ++k) c.gates.push_back(space.decode(1 + rng.uniform_int(0, A - 1)).gates[0]);
    CHECK(space.decode(space.encode(c)) == c);
  }
}

TEST_CASE("app of the empty circuit and of a single gate") {
  CodeSpace space(GateSet::standard(), 2, 2);
  Rng rng(4);
  RegisterLayout lay{{"x", 2}};
  auto psi = StateVector::from_amplitudes(lay, haar_vector(rng, 4));
  CHECK((app(space, 0, psi, "x").amplitudes() - psi.amplitudes()).norm() < 1e-12);
  for (std::uint64_t code = 1; code <= space.actions(); ++code) {
    const Circuit c = space.decode(code);
    const auto& g = space.gate_set()[c.gates[0].gate];
    auto direct = psi;
    direct.apply_matrix(g.unitary.matrix(), c.gates[0].targets);
    CHECK((app(space, code, psi, "x").amplitudes() - direct.amplitudes()).norm() < 1e-12);
  }
}

TEST_CASE("app followed by its reverse-inverse is the identity") {
  CodeSpace space(GateSet::standard(), 2, 3);
  Rng rng(8);
  RegisterLayout lay{{"x", 2}};
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t code = rng.uniform_int(0, space.size() - 1);
    auto psi = StateVector::from_amplitudes(lay, haar_vector(rng, 4));
    auto out = app(space, code, psi, "x");
    app_inverse_inplace(out, space.gate_set(), space.decode(code), "x");
    CHECK((out.amplitudes() - psi.amplitudes()).norm() < 1e-9);
  }
}

TEST_CASE("build_unitary matches app and known gates") {
  CodeSpace space(GateSet::standard(), 2, 2);
  CHECK((build_unitary(space, 0).matrix() - Matrix::Identity(4, 4)).norm() < 1e-12);
  Circuit c{2, {{space.gate_set().index_of("CNOT"), {0, 1}}}};
  Matrix perm = Matrix::Zero(4, 4);
  // control qubit 0, target qubit 1: |c=1,t=0> (1) <-> |c=1,t=1> (3)
  perm(0, 0) = perm(2, 2) = perm(3, 1) = perm(1, 3) = 1;
  CHECK((build_unitary(space, space.encode(c)).matrix() - perm).norm() < 1e-12);

  Rng rng(12);
  RegisterLayout lay{{"x", 2}};
  for (std::uint64_t code = 0; code < space.size(); ++code) {
    const DenseUnitary u = build_unitary(space, code);
    auto psi = StateVector::from_amplitudes(lay, haar_vector(rng, 4));
    CHECK((app(space, code, psi, "x").amplitudes() - u.matrix() * psi.amplitudes()).norm() < 1e-12);
    CHECK(unitarity_defect(u.matrix()) < 1e-8);
  }
}

TEST_CASE("u_seq gives U^a per counter branch") {
  const int L = 8;
  RegisterLayout lay{{"x", 1}, {"a", 3}};
  Matrix ph = Matrix::Identity(2, 2);
  ph(1, 1) = std::polar(1.0, 2 * M_PI * 0.25);
  MatrixDevice dev{DenseUnitary(ph)};
  // a=0 branch unchanged
  auto s0 = StateVector::basis(lay, {{"x", 1}, {"a", 0}});
  CHECK((u_seq(s0, dev, "a", "x", L).amplitudes() - s0.amplitudes()).norm() < 1e-12);
  // a=2 on the eigenvector: phase e^{2 pi i 0.5}
  auto s2 = StateVector::basis(lay, {{"x", 1}, {"a", 2}});
  const auto o2 = u_seq(s2, dev, "a", "x", L);
  CHECK(std::abs(o2.amplitude(lay.compose({{"x", 1}, {"a", 2}})) - Complex(-1.0)) < 1e-12);
  // superposed counter picks up e^{2 pi i a w} (diagonal oracle)
  Vector counter = Vector::Constant(L, 1 / std::sqrt(double(L)));
  Vector eig = Vector::Zero(2);
  eig[1] = 1;
  auto sp = StateVector::product(lay, {{"a", counter}, {"x", eig}});
  const auto out = u_seq(sp, dev, "a", "x", L);
  for (int a = 0; a < L; ++a) {
    const Complex expect = std::polar(1 / std::sqrt(double(L)), 2 * M_PI * a * 0.25);
    CHECK(std::abs(out.amplitude(lay.compose({{"x", 1}, {"a", std::uint64_t(a)}})) - expect) < 1e-12);
  }
}

TEST_CASE("u_seq with fixed counter equals repeated app") {
  CodeSpace space(GateSet::standard(), 2, 3);
  Rng rng(21);
  const int L = 8;
  RegisterLayout lay{{"x", 2}, {"a", 3}};
  for (int trial = 0; trial < 10; ++trial) {
    const std::uint64_t code = rng.uniform_int(0, space.size() - 1);
    auto shared = std::make_shared<QueryCounter>();
    CountingDevice dev(make_code_device(space, code), shared);
    const Vector x = haar_vector(rng, 4);
    for (int a = 0; a < L; ++a) {
      Vector e = Vector::Zero(L);
      e[a] = 1;
      auto s = StateVector::product(lay, {{"x", x}, {"a", e}});
      const auto out = u_seq(s, dev, "a", "x", L);
      RegisterLayout just{{"x", 2}};
      auto ref = StateVector::from_amplitudes(just, x);
      for (int k = 0; k < a; ++k) ref = app(space, code, ref, "x");
      const oracle::Vec expect = oracle::kvec(e, ref.amplitudes());
      CHECK((out.amplitudes() - expect).norm() < 1e-9);
    }
    CHECK(shared->get("U") == std::uint64_t(L * (L - 1)));
  }
}

TEST_CASE("involutive gate set products of commuting involutions stay involutive") {
  CodeSpace space(GateSet::involutive(), 2, 1);
  for (std::uint64_t code = 0; code < space.size(); ++code) {
    const Matrix u = build_unitary(space, code).matrix();
    CHECK((u * u - Matrix::Identity(4, 4)).norm() < 1e-8);
  }
}

TEST_CASE("black box exposes forward application only") {
  auto counter = std::make_shared<QueryCounter>();
  CodeSpace space(GateSet::standard(), 1, 1);
  BlackBox box(make_code_device(space, 1), counter, "U");
  RegisterLayout lay{{"x", 1}, {"c", 1}};
  StateVector s(lay);
  box.apply(s, "x");
  box.apply_controlled(s, "c", "x");
  CHECK(counter->get("U") == 2);
  CHECK_THROWS_AS(box.apply_adjoint(s, "x"), BlackBoxViolation);
  CHECK_THROWS_AS(box.matrix(), BlackBoxViolation);
}
