#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qrec/device.hpp"
#include "qrec/structure.hpp"

using namespace qrec;

namespace {

SpectrumSpec spec8(std::vector<int> ls, MatchMode mode = MatchMode::Determined) {
  SpectrumSpec s;
  s.M = 8;
  s.L = 128;
  s.frequencies = std::move(ls);
  s.mode = mode;
  return s;
}

// W diag(e^{2 pi i w}) W^dagger with a Haar W
Matrix with_phases(const std::vector<double>& w, std::uint64_t seed) {
  Rng r(seed);
  const Matrix W = haar_unitary(r, static_cast<Eigen::Index>(w.size()));
  Vector d(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) d[static_cast<Eigen::Index>(i)] = std::polar(1.0, 2 * M_PI * w[i]);
  return W * d.asDiagonal() * W.adjoint();
}

}  // namespace

TEST_CASE("spectrum spec validation") {
  CHECK_NOTHROW(spec8({0, 2}).validate());
  CHECK_THROWS(spec8({}).validate());
  CHECK_THROWS(spec8({1, 1}).validate());
  CHECK_THROWS(spec8({8}).validate());
  SpectrumSpec bad = spec8({0});
  bad.L = 64;
  CHECK_THROWS(bad.validate());
  CHECK(match_mode_from_string("excludes") == MatchMode::Excludes);
  CHECK(to_string(MatchMode::Contains) == "contains");
  CHECK_THROWS(match_mode_from_string("some"));
}

TEST_CASE("bad frequencies agree with the exact spectrum") {
  StructureOptions opt;
  const DevicePtr id = make_matrix_device(Matrix::Identity(4, 4));
  for (int l = 0; l < 8; ++l) CHECK_FALSE(is_bad_frequency(*id, l, spec8({0}), opt, Rng(10 + l)));

  // spectrum {0, 1/4}: l = 1 is listed but unsupported
  const DevicePtr two = make_matrix_device(with_phases({0.0, 0.0, 0.25, 0.25}, 3));
  const SpectrumSpec s = spec8({0, 1, 2});
  const SpectralDecomposition dec = decompose(two->matrix());
  for (int l = 0; l < 8; ++l) {
    const bool exact = oracle_frequency(dec, l, s).bad;
    CHECK(exact == (l == 1));
    CHECK(is_bad_frequency(*two, l, s, opt, Rng(20 + l)) == exact);
  }

  // a frequency half a bin from 1/4 is close to an unlisted grid point
  const DevicePtr off = make_matrix_device(with_phases({0.0, 0.25 + 0.5 / 128, 0.0, 0.0}, 4));
  CHECK(oracle_frequency(decompose(off->matrix()), 2, spec8({0})).bad);
  CHECK(is_bad_frequency(*off, 2, spec8({0}), opt, Rng(5)));
}

TEST_CASE("spectrum_matches examples") {
  StructureOptions opt;
  const DevicePtr id = make_matrix_device(Matrix::Identity(4, 4));
  CHECK(spectrum_matches(*id, spec8({0}), opt, Rng(1)).matches);
  const MatchVerdict half = spectrum_matches(*id, spec8({0, 4}), opt, Rng(2));
  CHECK_FALSE(half.matches);
  CHECK(half.bad == std::vector<int>{4});
  CHECK(half.evidence.size() == 8);

  const Matrix u = with_phases({0.0, 0.25, 0.5, 0.5}, 7);
  const DevicePtr dev = make_matrix_device(u);
  CHECK(oracle_spectrum_matches(u, spec8({0, 2, 4})).matches);
  int ok = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) ok += spectrum_matches(*dev, spec8({0, 2, 4}), opt, Rng(1000 + i)).matches;
  CHECK(ok >= 198);
}

TEST_CASE("match modes relax one condition each") {
  StructureOptions opt;
  const Matrix u = with_phases({0.0, 0.0, 0.25, 0.25}, 9);
  const DevicePtr dev = make_matrix_device(u);
  struct Case {
    SpectrumSpec spec;
    bool expect;
  };
  const std::vector<Case> cases = {
      {spec8({0}, MatchMode::Contains), true},          {spec8({0}, MatchMode::Determined), false},
      {spec8({0, 2, 4}, MatchMode::Excludes), true},    {spec8({0, 2, 4}, MatchMode::Determined), false},
      {spec8({0, 2, 4}, MatchMode::Contains), false},   {spec8({0}, MatchMode::Excludes), false},
      {spec8({0, 2}, MatchMode::Determined), true},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CHECK(oracle_spectrum_matches(u, cases[i].spec).matches == cases[i].expect);
    CHECK(spectrum_matches(*dev, cases[i].spec, opt, Rng(40 + i)).matches == cases[i].expect);
  }
}

TEST_CASE("evidence fractions separate present and absent frequencies") {
  StructureOptions opt;
  opt.copies = 20;
  const Matrix u = with_phases({0.0, 0.25, 0.5, 0.5, 0.75, 0.0, 0.0, 0.0}, 11);
  const MatchVerdict v = spectrum_matches(*make_matrix_device(u), spec8({0, 2, 4, 6}), opt, Rng(3));
  double present = 0, absent = 0;
  int np = 0;
  for (const auto& e : v.evidence) {
    const double mean = std::accumulate(e.fractions.begin(), e.fractions.end(), 0.0) / e.fractions.size();
    if (e.l % 2 == 0) {
      present += mean;
      ++np;
    } else {
      absent = std::max(absent, mean);
    }
  }
  CHECK(present / np >= 7.0 / 32.0);
  CHECK(absent < 0.02);
}

TEST_CASE("find_structure on a one-code family") {
  CodeSpace sp(GateSet::phase_grid(), 2, 2);
  const StructureReport r = find_structure(spec8({0}), sp, 1, StructureOptions{}, Rng(1));
  REQUIRE(r.code);
  CHECK(*r.code == 0);
  CHECK(r.family == 1);
  StructureOptions small;
  small.max_codes = 8;
  CHECK_THROWS(find_structure(spec8({0}), sp, 16, small, Rng(1)));
}

TEST_CASE("find_structure finds the unique match among 16 codes") {
  CodeSpace sp(GateSet::phase_grid(), 2, 2);
  const SpectrumSpec s = spec8({0, 1, 4, 5});
  const std::vector<std::uint64_t> truth = matching_codes(s, sp, 16);
  REQUIRE(truth.size() == 1);
  StructureOptions opt;
  int hits = 0;
  const int runs = 30;
  for (int i = 0; i < runs; ++i) {
    const StructureReport r = find_structure(s, sp, 16, opt, Rng(500 + i));
    hits += r.code && *r.code == truth[0];
    CHECK(r.verifications == static_cast<std::uint64_t>(r.attempts));
  }
  CHECK(hits >= runs / 2);
  for (int i = 0; i < 3; ++i) {
    const StructureDecision d = find_structure_majority(s, sp, 16, 9, 0.5, opt, Rng(900 + i));
    REQUIRE(d.code);
    CHECK(*d.code == truth[0]);
  }
}

TEST_CASE("find_structure reports not-found when nothing matches") {
  CodeSpace sp(GateSet::phase_grid(), 2, 2);
  const SpectrumSpec s = spec8({0, 3});
  REQUIRE(matching_codes(s, sp, 16).empty());
  const StructureOptions opt;
  const StructureReport r = find_structure(s, sp, 16, opt, Rng(2));
  CHECK_FALSE(r.code);
  CHECK(r.attempts == opt.attempts);
  CHECK_FALSE(find_structure_majority(s, sp, 16, 9, 0.5, opt, Rng(3)).code);
}

TEST_CASE("oracle-marked search agrees with the exhaustive scan") {
  CodeSpace sp(GateSet::phase_grid(), 2, 2);
  StructureOptions opt;
  opt.oracle_marking = true;
  for (const auto& ls : std::vector<std::vector<int>>{{0}, {0, 4}, {0, 2}, {1, 5}, {0, 1, 4, 5}, {3}, {0, 2, 4, 6}}) {
    const SpectrumSpec s = spec8(ls);
    const auto truth = matching_codes(s, sp, 64);
    for (int i = 0; i < 5; ++i) {
      const StructureDecision d = find_structure_majority(s, sp, 64, 9, 0.5, opt, Rng(70 + i));
      if (truth.empty()) {
        CHECK_FALSE(d.code);
      } else {
        REQUIRE(d.code);
        CHECK(std::find(truth.begin(), truth.end(), *d.code) != truth.end());
      }
    }
  }
}
