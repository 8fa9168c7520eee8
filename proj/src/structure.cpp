#include "qrec/structure.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qrec {

std::string to_string(MatchMode m) {
  switch (m) {
    case MatchMode::Determined: return "determined";
    case MatchMode::Contains: return "contains";
    case MatchMode::Excludes: return "excludes";
  }
  return "determined";
}

MatchMode match_mode_from_string(std::string_view s) {
  if (s == "determined") return MatchMode::Determined;
  if (s == "contains") return MatchMode::Contains;
  if (s == "excludes") return MatchMode::Excludes;
  throw std::invalid_argument("unknown match mode '" + std::string(s) + "'");
}

void SpectrumSpec::validate() const {
  if (M < 1 || L != 16 * M || !is_power_of_two(static_cast<std::uint64_t>(L)))
    throw std::invalid_argument("spectrum spec needs L = 16M with L a power of two");
  if (frequencies.empty()) throw std::invalid_argument("spectrum spec needs at least one frequency");
  std::vector<int> f = frequencies;
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw std::invalid_argument("duplicate frequency in spec");
  if (f.front() < 0 || f.back() >= M) throw std::invalid_argument("spec frequency outside [0, M)");
}

bool SpectrumSpec::contains(int l) const {
  return std::find(frequencies.begin(), frequencies.end(), l) != frequencies.end();
}

namespace {

bool classify(const SpectrumSpec& spec, bool in_spec, bool found) {
  switch (spec.mode) {
    case MatchMode::Determined: return in_spec != found;
    case MatchMode::Contains: return in_spec && !found;
    case MatchMode::Excludes: return !in_spec && found;
  }
  return false;
}

double grid_point(const SpectrumSpec& spec, int l) { return static_cast<double>(l) / spec.M; }

bool near(const SpectrumSpec& spec, double a, double b) { return circular_distance(a, b) <= 1.0 / spec.L + 1e-12; }

void finish(MatchVerdict& v) {
  for (const auto& e : v.evidence)
    if (e.bad) v.bad.push_back(e.l);
  v.matches = v.bad.empty();
}

}  // namespace

FrequencyEvidence oracle_frequency(const SpectralDecomposition& dec, int l, const SpectrumSpec& spec) {
  FrequencyEvidence e;
  e.l = l;
  e.in_spec = spec.contains(l);
  for (const auto& s : dec.spaces)
    if (near(spec, s.omega, grid_point(spec, l))) e.found = true;
  e.bad = classify(spec, e.in_spec, e.found);
  return e;
}

MatchVerdict oracle_spectrum_matches(const Matrix& u, const SpectrumSpec& spec) {
  spec.validate();
  const SpectralDecomposition dec = decompose(u);
  MatchVerdict v;
  for (int l = 0; l < spec.M; ++l) v.evidence.push_back(oracle_frequency(dec, l, spec));
  for (const auto& s : dec.spaces) {
    bool on = false;
    for (int l = 0; l < spec.M && !on; ++l) on = near(spec, s.omega, grid_point(spec, l));
    if (!on) v.off_grid.push_back(s.omega);
  }
  finish(v);
  return v;
}

FrequencyEvidence frequency_evidence(const Device& u, const SpectralOracle& oracle, int l, const SpectrumSpec& spec,
                                     const StructureOptions& opt, const Rng& rng) {
  if (l < 0 || l >= spec.M) throw std::invalid_argument("candidate frequency outside [0, M)");
  if (opt.copies < 1 || opt.registers < 1) throw std::invalid_argument("structure check needs copies, registers >= 1");
  if (!(opt.rho_copies > 0.0 && opt.rho_copies <= 1.0)) throw std::invalid_argument("rho_copies must lie in (0, 1]");
  EigenQuery q;
  q.M = spec.M;
  q.L = spec.L;
  q.omega_l = l * (spec.L / spec.M);
  q.v = opt.v;
  q.h = opt.registers;
  q.backend = opt.backend;
  q.accept_rho = opt.rho_registers;
  q.stopping = opt.stopping;
  q.rest = RestKind::Inverse;

  FrequencyEvidence e;
  e.l = l;
  e.in_spec = spec.contains(l);
  int agree = 0;
  for (int j = 0; j < opt.copies; ++j) {
    const RecognitionReport r = recognize_eigenvalue(q, u, rng.stream("copy", static_cast<std::uint64_t>(j)), &oracle);
    e.fractions.push_back(r.fraction);
    e.queries += r.queries;
    agree += r.verdict;
  }
  e.found = agree >= opt.rho_copies * opt.copies - 1e-12;
  e.bad = classify(spec, e.in_spec, e.found);
  return e;
}

namespace {

MatchVerdict scan(const Device& u, const SpectralOracle& oracle, const SpectrumSpec& spec, const StructureOptions& opt,
                  const Rng& rng) {
  MatchVerdict v;
  for (int l = 0; l < spec.M; ++l) {
    v.evidence.push_back(frequency_evidence(u, oracle, l, spec, opt, rng.stream("freq", static_cast<std::uint64_t>(l))));
    v.queries += v.evidence.back().queries;
  }
  finish(v);
  return v;
}

}  // namespace

bool is_bad_frequency(const Device& u, int l, const SpectrumSpec& spec, const StructureOptions& opt, const Rng& rng) {
  spec.validate();
  const SpectralOracle oracle = SpectralOracle::windowed(u.matrix(), spec.L);
  return frequency_evidence(u, oracle, l, spec, opt, rng).bad;
}

MatchVerdict spectrum_matches(const Device& u, const SpectrumSpec& spec, const StructureOptions& opt,
                              const Rng& rng) {
  spec.validate();
  const SpectralOracle oracle = SpectralOracle::windowed(u.matrix(), spec.L);
  return scan(u, oracle, spec, opt, rng);
}

StructureReport find_structure(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family,
                               const StructureOptions& opt, const Rng& rng) {
  spec.validate();
  const std::uint64_t T = family == 0 ? space.size() : std::min(family, space.size());
  if (T == 0) throw std::invalid_argument("empty code family");
  if (T > opt.max_codes) throw std::invalid_argument("code family exceeds the configured cap");
  if (opt.attempts < 1) throw std::invalid_argument("structure search needs attempts >= 1");

  StructureReport rep;
  rep.family = T;
  rep.seed = rng.key();

  auto check = [&](std::uint64_t code, const Rng& r, std::uint64_t& cost) {
    const DevicePtr dev = make_code_device(space, code);
    if (opt.oracle_marking) return oracle_spectrum_matches(dev->matrix(), spec).matches;
    const MatchVerdict m = spectrum_matches(*dev, spec, opt, r);
    cost = m.queries;
    return m.matches;
  };

  // Marked set of the code reflection for this run.
  std::vector<char> marked(T, 0);
  std::uint64_t check_cost = 0;
  for (std::uint64_t c = 0; c < T; ++c) {
    std::uint64_t cost = 0;
    marked[c] = check(c, rng.stream("mark", c), cost);
    check_cost += cost;
  }
  check_cost /= T;

  for (int a = 0; a < opt.attempts; ++a) {
    Rng ar = rng.stream("attempt", static_cast<std::uint64_t>(a));
    const SearchSample s = random_time_search([&](std::uint64_t i) { return marked[i] != 0; }, T, opt.stopping, ar);
    ++rep.attempts;
    rep.sampled.push_back(s.outcome);
    rep.marked_evaluations += s.t;
    rep.queries += s.t * check_cost;
    std::uint64_t cost = 0;
    const bool ok = check(s.outcome, rng.stream("verify", static_cast<std::uint64_t>(a)), cost);
    ++rep.verifications;
    rep.queries += cost;
    if (ok) {
      rep.code = s.outcome;
      break;
    }
  }
  return rep;
}

StructureDecision find_structure_majority(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family,
                                          int runs, double rho, const StructureOptions& opt, const Rng& rng) {
  if (runs < 1) throw std::invalid_argument("majority needs runs >= 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  StructureDecision d;
  d.runs = runs;
  d.rho = rho;
  std::map<std::uint64_t, int> tally;
  for (int r = 0; r < runs; ++r) {
    d.reports.push_back(find_structure(spec, space, family, opt, rng.stream("run", static_cast<std::uint64_t>(r))));
    if (const auto& c = d.reports.back().code) {
      ++d.found;
      ++tally[*c];
    }
  }
  if (d.found >= rho * runs - 1e-12) {
    auto best = std::max_element(tally.begin(), tally.end(),
                                 [](const auto& x, const auto& y) { return x.second < y.second; });
    d.code = best->first;
  }
  return d;
}

std::vector<std::uint64_t> matching_codes(const SpectrumSpec& spec, const CodeSpace& space, std::uint64_t family) {
  spec.validate();
  const std::uint64_t T = family == 0 ? space.size() : std::min(family, space.size());
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 0; c < T; ++c)
    if (oracle_spectrum_matches(build_unitary(space, c).matrix(), spec).matches) out.push_back(c);
  return out;
}

}  // namespace qrec
