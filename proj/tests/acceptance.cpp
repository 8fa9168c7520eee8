// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qrec/experiments.hpp"
#include "qrec/fixtures.hpp"

using namespace qrec;

namespace {

struct Line {
  int id;
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Line c1_rev_window() {
  const auto t0 = std::chrono::steady_clock::now();
  const WTypeCheck w = verify_rev(50, {32, 64}, 3, 16, Rng(1001));
  const double secs = seconds_since(t0);
  const bool pass = w.pass && w.min_mass >= 7.0 / 8.0 - 1e-9 && w.unitaries >= 50 && secs < 60.0;
  return {1, pass,
          fmt("Rev W-type: %d unitaries, %d eigenvector inputs, min window mass %.6f (need >= 0.875), %.1fs",
              w.unitaries, w.entries, w.min_mass, secs)};
}

Line c2_restoration() {
  bool pass = true;
  std::string detail = "Rest residual vs 7M/L:";
  for (int M : {4, 8})
    for (int f : {16, 64}) {
      const RestCheck r = verify_rest(M, f * M, 20, Rng(2000 + M * 100 + f));
      pass = pass && r.pass;
      detail += fmt(" M=%d L=%d max %.4f < %.4f, inverse %.1e;", M, r.L, r.max_turning, r.bound, r.max_inverse);
    }
  return {2, pass, detail};
}

Line c3_grover_mean() {
  double worst = 1.0;
  for (std::uint64_t N : {8, 16, 32, 64})
    for (std::uint64_t m : {1, 2}) {
      // marked set {0, N/2} truncated to size m
      const double p = mean_success_probability(N, [&](std::uint64_t x) { return x == 0 || (m == 2 && x == N / 2); });
      worst = std::min(worst, p);
    }
  return {3, worst >= 0.25 - 1e-9, fmt("Grover mean success over t in {0..B}: min %.6f (need >= 0.25)", worst)};
}

Line c4_majority() {
  bool pass = true;
  std::string detail = "majority error, k = 4 log2 N, rho = 1/5, 1000 meta-trials:";
  for (std::uint64_t N : {16, 64, 256}) {
    const int k = 4 * static_cast<int>(std::lround(std::log2(static_cast<double>(N))));
    const std::uint64_t target = N / 3;
    int err = 0;
    const int meta = 1000;
    for (int i = 0; i < meta; ++i) {
      Rng r = Rng(4000 + N).stream("meta", i);
      const MajorityDecision d = majority_search([&](std::uint64_t x) { return x == target; }, N, k, 0.2, r);
      err += !(d.value && *d.value == target);
    }
    const double rate = static_cast<double>(err) / meta;
    const double bound = 1.0 / std::sqrt(static_cast<double>(N));
    const double limit = bound + 3.0 * std::sqrt(bound * (1 - bound) / meta);
    pass = pass && rate <= limit;
    detail += fmt(" N=%d err %.3f <= %.3f;", static_cast<int>(N), rate, limit);
  }
  return {4, pass, detail};
}

Line c5_degeneracy() {
  int runs = 0, bracketed = 0, refined_ok = 0;
  double worst = 0.0;
  const int per = 10;
  for (int N : {32, 64})
    for (int d : {1, 2, 4, 8})
      for (int i = 0; i < per; ++i) {
        Rng r = Rng(5000).stream("deg", {std::uint64_t(N), std::uint64_t(d), std::uint64_t(i)});
        Rng br = r.stream("basis");
        const Matrix basis = haar_unitary(br, N).leftCols(d);
        Rng cr = r.stream("count");
        const CountResult c = count_rotation_time(basis, 0.05, cr);
        ++runs;
        bracketed += c.bracket_lo <= d && d <= c.bracket_hi;
        const double rel = std::fabs(c.d_hat - d) / static_cast<double>(d);
        worst = std::max(worst, rel);
        refined_ok += rel <= 0.15;
      }
  const double frac = static_cast<double>(bracketed) / runs;
  const bool pass = frac >= 0.95 && refined_ok == runs;
  return {5, pass,
          fmt("degeneracy: bracket [3a/4, a] holds in %d/%d runs (%.1f%%, need >= 95%%); eps=0.05 refinement within "
              "15%% in %d/%d runs (worst %.1f%%)",
              bracketed, runs, 100 * frac, refined_ok, runs, 100 * worst)};
}

Line c6_thermo() {
  const std::vector<std::vector<Level>> fixtures = {
      {{0, 1}, {1, 3}, {2, 4}, {3, 8}},
      {{0, 2}, {1, 6}, {1.004, 2}, {2, 6}, {3, 16}},
      {{0.2, 1}, {0.7, 7}, {1.2, 24}, {1.7, 32}},
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const HamiltonianSpec h = HamiltonianSpec::from_levels(fixtures[i]);
    const double Es = fixtures[i].back().energy;
    const ThermoReport rep = run_thermo(h, {0.5 * Es, Es, 2 * Es}, {}, Rng(6000 + i));
    for (const auto& res : rep.results) {
      // direct sum over every eigenvalue of the level list
      double Q = 0, E = 0, S = 0;
      for (const auto& l : fixtures[i]) Q += l.degeneracy * std::exp(-l.energy / res.kbt);
      for (const auto& l : fixtures[i]) {
        const double p = std::exp(-l.energy / res.kbt) / Q;
        E += l.degeneracy * p * l.energy;
        S -= l.degeneracy * p * std::log(p);
      }
      for (auto [got, want] : {std::pair{res.Q, Q}, {res.mean_energy, E}, {res.entropy, S}})
        worst = std::max(worst, std::fabs(got - want) / std::fabs(want));
    }
  }
  return {6, worst <= 0.05,
          fmt("thermodynamics: worst relative error of Q, <E>, S over 3 fixtures x 3 temperatures %.4f (need <= 0.05)",
              worst)};
}

Line c7_structure() {
  const CodeSpace sp(GateSet::phase_grid(), 2, 2);
  SpectrumSpec s;
  s.frequencies = {0, 1, 4, 5};
  const auto truth = matching_codes(s, sp, 16);
  if (truth.size() != 1) return {7, false, "fixture spec does not have a unique match"};
  const StructureOptions opt;
  int runs = 0, run_hits = 0, majority_hits = 0;
  const int experiments = 100;
  for (int e = 0; e < experiments; ++e) {
    const StructureDecision d = find_structure_majority(s, sp, 16, 9, 0.5, opt, Rng(7000).stream("exp", e));
    majority_hits += d.code && *d.code == truth[0];
    for (const auto& r : d.reports) {
      ++runs;
      run_hits += r.code && *r.code == truth[0];
    }
  }
  SpectrumSpec none;
  none.frequencies = {0, 3};
  const bool empty = matching_codes(none, sp, 16).empty();
  const bool not_found = !find_structure_majority(none, sp, 16, 9, 0.5, opt, Rng(7999)).code;
  const double per_run = static_cast<double>(run_hits) / runs;
  const bool pass = per_run >= 0.5 && majority_hits >= 99 && empty && not_found;
  return {7, pass,
          fmt("structure search T=16: per-run %.3f (need >= 0.5), 9-run majority %d/%d (need >= 99), no-match spec "
              "-> %s",
              per_run, majority_hits, experiments, not_found ? "not-found" : "FOUND")};
}

Line c8_distinguish() {
  bool pass = true;
  std::string detail = "difference, d=0.5, N in {8,16,32}, 200 trials per class:";
  for (auto k : {PromiseClass::Equal, PromiseClass::EqualDim, PromiseClass::NestedMismatch,
                 PromiseClass::AngledMismatch, PromiseClass::Empty}) {
    int different = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
      const Rng r = Rng(8000).stream(to_string(k), i);
      const int n = 3 + i % 3;
      const PairFixture fx = make_pair_fixture(k, n, 4, 1, 0.5, r.stream("fixture"));
      DistinguishCase c(make_matrix_device(fx.u), make_matrix_device(fx.v), fx.omega);
      different += difference(c, r.stream("run")).verdict == Verdict::Different;
    }
    const double rate = static_cast<double>(different) / trials;
    pass = pass && (k == PromiseClass::Equal ? different == 0 : rate >= 0.5);
    detail += fmt(" %s %d/%d;", to_string(k).c_str(), different, trials);
  }
  return {8, pass, detail};
}

Line c9_devices() {
  const CodeSpace sp(GateSet::involutive(), 2, 2);
  const auto codes = involutive_family(sp, 8);
  std::vector<DevicePtr> fam;
  for (auto c : codes) fam.push_back(make_code_device(sp, c));
  const Json fx = make_fixture("involutive-family", Json::object(), Rng(0));
  const double min_sep = fx["oracle"]["min_separation"].get<double>();
  const DeviceSearchOptions opt;
  int hits = 0;
  const int experiments = 100;
  for (int e = 0; e < experiments; ++e) {
    const auto truth = static_cast<std::uint64_t>(e % 8);
    const DeviceDecision d = recognize_device_majority(fam[truth], fam, 9, 0.5, opt, Rng(9000).stream("exp", e));
    hits += d.code && *d.code == truth;
  }
  const double rate = static_cast<double>(hits) / experiments;
  return {9, rate >= 0.99 && min_sep >= 0.5,
          fmt("device recognition, 8 involutions with spectrum {0, 1/2}: pairwise separation >= %.3f, majority "
              "success %d/%d (need >= 99%%)",
              min_sep, hits, experiments)};
}

Line c10_slopes() {
  const Sweep a = recognition_sweep({3, 4, 5, 6, 7, 8}, 20, Rng(10001));
  const Sweep b = structure_sweep({4, 8, 16, 32, 64, 128, 256}, 50, Rng(10002));
  const Sweep c = difference_d_sweep({0.5, 0.25, 0.125}, 3, 40, Rng(10003));
  const bool pa = std::fabs(a.fit.slope - 0.5) <= 0.15;
  const bool pb = std::fabs(b.fit.slope - 0.5) <= 0.15;
  const bool pc = std::fabs(c.fit.slope - 0.5) <= 0.2;
  return {10, pa && pb && pc,
          fmt("query slopes: recognition vs N %.3f (%s, 0.5+-0.15), structure vs T %.3f (%s, 0.5+-0.15), difference "
              "vs 1/d %.3f (%s, 0.5+-0.2)",
              a.fit.slope, pa ? "ok" : "out", b.fit.slope, pb ? "ok" : "out", c.fit.slope, pc ? "ok" : "out")};
}

Line c11_backends() {
  int agree = 0, cases = 0;
  double worst_tv = 0.0;
  std::map<int, double> by_v;
  for (int c = 0; c < 50; ++c) {
    const Rng r = Rng(11000).stream("case", c);
    const int n = 1 + c % 3, v = 1 + (c / 3) % 2, h = 1 + c % 4;
    Rng fr = r.stream("fixture");
    SparseSpectrumOptions so;
    so.offset_scale = 0.5;
    const SpectrumFixture fx = random_sparse_unitary(fr, n, 4, 64, so);
    const SpectralOracle orc{fx.dec, fx.profile};
    const auto dev = make_matrix_device(fx.u);
    EigenQuery q;
    q.M = 4;
    q.L = 64;
    q.v = v;
    q.h = h;
    // alternate a group anchor and the grid point next to it
    q.omega_l = ((fx.profile.groups[0].anchor + (c / 2) % 2) % 4) * 16;
    const RecognitionReport a = recognize_eigenvalue(q, *dev, r.stream("run"), &orc);
    q.backend = Backend::Circuit;
    const RecognitionReport b = recognize_eigenvalue(q, *dev, r.stream("run"), &orc);
    ++cases;
    agree += a.verdict == b.verdict;
    for (int k = 0; k < q.h; ++k) {
      double tv = 0.0;
      for (int l = 0; l < q.L; ++l)
        tv += std::fabs(a.registers[static_cast<std::size_t>(k)].readout_dist[static_cast<std::size_t>(l)] -
                        b.registers[static_cast<std::size_t>(k)].readout_dist[static_cast<std::size_t>(l)]);
      worst_tv = std::max(worst_tv, tv / 2);
      by_v[v] = std::max(by_v[v], tv / 2);
    }
  }
  return {11, agree == cases && worst_tv <= 0.05,
          fmt("backend equivalence: verdicts agree %d/%d, worst register TV %.4f (need <= 0.05; v=1 %.4f, v=2 %.4f)",
              agree, cases, worst_tv, by_v[1], by_v[2])};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Line()>> criteria = {c1_rev_window, c2_restoration, c3_grover_mean, c4_majority,
                                                       c5_degeneracy,  c6_thermo,      c7_structure,   c8_distinguish,
                                                       c9_devices,     c10_slopes,     c11_backends};
  // optional list of criterion numbers to run
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = criteria[i]();
    } catch (const std::exception& e) {
      l = {static_cast<int>(i + 1), false, std::string("exception: ") + e.what()};
    }
    failed += !l.pass;
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", l.pass ? "PASS" : "FAIL", l.id, l.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
