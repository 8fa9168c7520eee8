#include "qrec/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "qrec/fixtures.hpp"

namespace qrec {

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("log-log fit needs positive values");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

namespace {

void finish(Sweep& s) {
  std::vector<double> x, y;
  for (const auto& p : s.points) {
    x.push_back(p.x);
    y.push_back(p.queries);
  }
  s.fit = fit_loglog(x, y);
}

// {3/8}: no phase_grid code on two qubits has this spectrum (checked at run time)
SpectrumSpec no_match_spec() {
  SpectrumSpec s;
  s.M = 8;
  s.L = 128;
  s.frequencies = {3};
  return s;
}

}  // namespace

Sweep recognition_sweep(const std::vector<int>& qubits, int trials, const Rng& rng) {
  Sweep s{"recognition-N", {}, {}};
  for (int n : qubits) {
    double total = 0;
    for (int t = 0; t < trials; ++t) {
      Rng r = rng.stream("recognition", {std::uint64_t(n), std::uint64_t(t)});
      Rng fr = r.stream("fixture");
      const SpectrumFixture fx = random_sparse_unitary(fr, n, 4, 64);
      const SpectralOracle orc{fx.dec, fx.profile};
      EigenQuery q;
      q.M = 4;
      q.L = 64;
      q.omega_l = fx.profile.groups[0].anchor * 16;
      const auto dev = make_matrix_device(fx.u);
      total += static_cast<double>(recognize_eigenvalue(q, *dev, r.stream("run"), &orc).queries);
    }
    s.points.push_back({std::ldexp(1.0, n), total / trials, trials});
  }
  finish(s);
  return s;
}

Sweep structure_sweep(const std::vector<std::uint64_t>& families, int trials, const Rng& rng) {
  Sweep s{"structure-T", {}, {}};
  const CodeSpace sp(GateSet::phase_grid(), 2, 3);
  const SpectrumSpec spec = no_match_spec();
  StructureOptions opt;
  opt.oracle_marking = true;
  for (std::uint64_t T : families) {
    if (!matching_codes(spec, sp, T).empty()) throw std::logic_error("structure sweep spec matches a code");
    double total = 0;
    for (int t = 0; t < trials; ++t)
      total += static_cast<double>(
          find_structure(spec, sp, T, opt, rng.stream("structure", {T, std::uint64_t(t)})).marked_evaluations);
    s.points.push_back({static_cast<double>(T), total / trials, trials});
  }
  finish(s);
  return s;
}

Sweep difference_d_sweep(const std::vector<double>& ds, int n, int trials, const Rng& rng) {
  Sweep s{"difference-d", {}, {}};
  for (std::size_t k = 0; k < ds.size(); ++k) {
    DistinguishOptions opt;
    opt.d = ds[k];
    double total = 0;
    for (int t = 0; t < trials; ++t) {
      const Rng r = rng.stream("difference-d", {k, std::uint64_t(t)});
      const PairFixture fx = make_pair_fixture(PromiseClass::EqualDim, n, opt.M, 1, opt.d, r.stream("fixture"));
      DistinguishCase c(make_matrix_device(fx.u), make_matrix_device(fx.v), fx.omega, opt);
      difference(c, r.stream("run"));
      total += static_cast<double>(c.queries());
    }
    s.points.push_back({1.0 / ds[k], total / trials, trials});
  }
  finish(s);
  return s;
}

Sweep difference_n_sweep(const std::vector<int>& qubits, double d, int trials, const Rng& rng) {
  Sweep s{"difference-N", {}, {}};
  DistinguishOptions opt;
  opt.d = d;
  for (int n : qubits) {
    double total = 0;
    for (int t = 0; t < trials; ++t) {
      const Rng r = rng.stream("difference-N", {std::uint64_t(n), std::uint64_t(t)});
      const PairFixture fx = make_pair_fixture(PromiseClass::EqualDim, n, opt.M, 1, d, r.stream("fixture"));
      DistinguishCase c(make_matrix_device(fx.u), make_matrix_device(fx.v), fx.omega, opt);
      difference(c, r.stream("run"));
      total += static_cast<double>(c.queries());
    }
    s.points.push_back({std::ldexp(1.0, n), total / trials, trials});
  }
  finish(s);
  return s;
}

Sweep run_sweep(const std::string& kind, const Json& grid, int trials, const Rng& rng) {
  if (kind == "recognition-N")
    return recognition_sweep(grid.is_null() ? std::vector<int>{3, 4, 5, 6, 7, 8} : grid.get<std::vector<int>>(),
                             trials, rng);
  if (kind == "structure-T")
    return structure_sweep(grid.is_null() ? std::vector<std::uint64_t>{4, 16, 64, 256}
                                          : grid.get<std::vector<std::uint64_t>>(),
                           trials, rng);
  if (kind == "difference-d")
    return difference_d_sweep(grid.is_null() ? std::vector<double>{0.5, 0.25, 0.125} : grid.get<std::vector<double>>(),
                              3, trials, rng);
  if (kind == "difference-N")
    return difference_n_sweep(grid.is_null() ? std::vector<int>{3, 4, 5, 6, 7} : grid.get<std::vector<int>>(), 0.5,
                              trials, rng);
  throw std::invalid_argument("unknown sweep '" + kind + "'");
}

Json to_json(const Sweep& s) {
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back({{"x", p.x}, {"queries", p.queries}, {"trials", p.trials}});
  return {{"kind", s.kind}, {"points", pts}, {"fit", {{"slope", s.fit.slope}, {"intercept", s.fit.intercept}}}};
}

WTypeCheck verify_rev(int count, const std::vector<int>& Ls, int max_qubits, int K, const Rng& rng) {
  if (Ls.empty() || max_qubits < 1) throw std::invalid_argument("verify_rev needs L values and qubits");
  WTypeCheck out;
  for (int i = 0; i < count; ++i) {
    const int n = 1 + i % max_qubits;
    const int L = Ls[static_cast<std::size_t>(i) % Ls.size()];
    Rng r = rng.stream("unitary", i);
    const Matrix m = haar_unitary(r, Eigen::Index{1} << n);
    const MatrixDevice u{DenseUnitary(m)};
    RegisterLayout lay;
    lay.add("x", n).add("f", log2_exact(static_cast<std::uint64_t>(L)));
    std::vector<ChannelEntry> channel;
    for (const auto& sp : decompose(m).spaces)
      for (Eigen::Index c = 0; c < sp.basis.cols(); ++c) {
        StateVector s = StateVector::product(lay, {{"x", sp.basis.col(c)}});
        rev_inplace(s, u, "f", "x", L);
        channel.push_back({sp.omega, distribution(s, "f")});
        out.min_mass = std::min(out.min_mass, window_mass(channel.back(), static_cast<double>(K) / L));
      }
    out.entries += static_cast<int>(channel.size());
    out.pass = out.pass && verify_w_type(channel, K);
    ++out.unitaries;
  }
  return out;
}

RestCheck verify_rest(int M, int L, int cases, const Rng& rng) {
  RestCheck out;
  out.M = M;
  out.L = L;
  out.bound = 7.0 * M / L;
  for (int i = 0; i < cases; ++i) {
    Rng r = rng.stream("rest", i);
    Rng fr = r.stream("fixture");
    const SpectrumFixture fx = random_sparse_unitary(fr, 2, M, L);
    const MatrixDevice u{DenseUnitary(fx.u)};
    const FrequencyTable t = build_frequency_table(fx.dec, fx.profile);
    Rng cr = r.stream("chi");
    const Vector chi = haar_vector(cr, fx.u.rows());
    out.max_turning = std::max(out.max_turning, restoration_residual(chi, u, t, L, RestKind::Turning));
    out.max_inverse = std::max(out.max_inverse, restoration_residual(chi, u, t, L, RestKind::Inverse));
    ++out.cases;
  }
  out.pass = out.max_turning < out.bound && out.max_inverse <= 1e-9;
  return out;
}

std::vector<std::uint64_t> distinct_codes(const CodeSpace& space, std::size_t count) {
  std::vector<std::uint64_t> out;
  std::vector<Matrix> seen;
  for (std::uint64_t c = 0; c < space.size() && out.size() < count; ++c) {
    const Matrix m = build_unitary(space, c).matrix();
    if (std::any_of(seen.begin(), seen.end(), [&](const Matrix& s) { return (s - m).norm() < 1e-9; })) continue;
    seen.push_back(m);
    out.push_back(c);
  }
  if (out.size() < count) throw std::invalid_argument("code space holds too few distinct operators");
  return out;
}

namespace {

Json spectrum_json(const SpectralDecomposition& dec) {
  Json out = Json::array();
  for (const auto& sp : dec.spaces) out.push_back({{"omega", sp.omega}, {"dim", sp.dim()}});
  return out;
}

// largest max(mu_u, mu_v) over the grid frequencies, on the controlled lift
double separation(const DevicePtr& a, const DevicePtr& b, int M) {
  double best = 0.0;
  const DevicePtr ca = controlled_device(a), cb = controlled_device(b);
  const SpectralDecomposition da = decompose(ca->matrix()), db = decompose(cb->matrix());
  for (int l = 0; l < M; ++l) {
    const Subspaces s =
        analyze_subspaces(cell_basis(da, static_cast<double>(l) / M, M), cell_basis(db, static_cast<double>(l) / M, M));
    best = std::max(best, s.coincident ? 0.0 : std::max(s.mu_u, s.mu_v));
  }
  return best;
}

}  // namespace

Json make_fixture(const std::string& name, const Json& p, const Rng& rng) {
  if (name == "sparse-spectrum") {
    const int N = p.value("N", 64), M = p.value("M", 4);
    const int L = p.value("L", 16 * M);
    const int n = log2_exact(static_cast<std::uint64_t>(N));
    Rng r = rng.stream("sparse");
    SparseSpectrumOptions opt;
    opt.groups = p.value("groups", 2);
    const SpectrumFixture fx = random_sparse_unitary(r, n, M, L, opt);
    Json groups = Json::array();
    for (const auto& g : fx.profile.groups)
      groups.push_back({{"anchor", g.anchor}, {"frequencies", g.frequencies}, {"degeneracy", g.degeneracy}});
    return {{"name", name},
            {"files", {{"device.json", {{"matrix", matrix_to_json(fx.u)}}}}},
            {"oracle", {{"M", M}, {"L", L}, {"spectrum", spectrum_json(fx.dec)}, {"groups", groups}}}};
  }
  if (name == "equal-spectrum-pair") {
    const double d = p.value("d", 0.5);
    const int n = p.value("n", 3), M = p.value("M", 4), l = p.value("omega_l", 1);
    const PromiseClass kind = promise_class_from_string(p.value("kind", std::string("equal-dim")));
    const PairFixture fx = make_pair_fixture(kind, n, M, l, d, rng.stream("pair"));
    DistinguishOptions opt;
    opt.M = M;
    opt.d = d;
    DistinguishCase c(make_matrix_device(fx.u), make_matrix_device(fx.v), fx.omega, opt);
    return {{"name", name},
            {"files", {{"u.json", {{"matrix", matrix_to_json(fx.u)}}}, {"v.json", {{"matrix", matrix_to_json(fx.v)}}}}},
            {"oracle",
             {{"kind", to_string(kind)}, {"omega", fx.omega}, {"d", d}, {"subspaces", to_json(c.subspaces())}}}};
  }
  if (name == "involutive-family") {
    const int n = p.value("n", 2), cl = p.value("c", 2);
    const auto count = p.value("count", std::size_t{8});
    const CodeSpace sp(GateSet::involutive(), n, cl);
    const auto codes = involutive_family(sp, count);
    std::vector<DevicePtr> devs;
    Json circuits = Json::array();
    for (auto c : codes) {
      devs.push_back(make_code_device(sp, c));
      circuits.push_back(circuit_to_json(sp.gate_set(), sp.decode(c)));
    }
    Json matrix = Json::array();
    double min_sep = 1.0;
    for (std::size_t i = 0; i < devs.size(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < devs.size(); ++j) {
        const double s = i == j ? 0.0 : separation(devs[i], devs[j], 4);
        if (i != j) min_sep = std::min(min_sep, s);
        row.push_back(s);
      }
      matrix.push_back(std::move(row));
    }
    return {{"name", name},
            {"family", {{"gate_set", sp.gate_set().name()}, {"n", n}, {"c", cl}, {"codes", codes}}},
            {"circuits", circuits},
            {"oracle", {{"separation", matrix}, {"min_separation", min_sep}, {"spectrum", spectrum_json(decompose(devs[0]->matrix()))}}}};
  }
  if (name == "thermo-levels") {
    const std::vector<std::vector<Level>> sets = {
        {{0, 1}, {1, 3}, {2, 4}, {3, 8}},
        {{0, 2}, {1, 6}, {1.004, 2}, {2, 6}, {3, 16}},
        {{0.2, 1}, {0.7, 7}, {1.2, 24}, {1.7, 32}},
    };
    const auto i = p.value("index", std::size_t{0});
    if (i >= sets.size()) throw std::invalid_argument("thermo fixture index out of range");
    return {{"name", name}, {"files", {{"hamiltonian.json", {{"levels", levels_to_json(sets[i])}}}}}};
  }
  if (name == "structure-spec") {
    SpectrumSpec s;
    s.frequencies = {0, 1, 4, 5};
    const CodeSpace sp(GateSet::phase_grid(), 2, 2);
    return {{"name", name},
            {"files", {{"spec.json", to_json(s)}}},
            {"oracle", {{"gate_set", "phase_grid"}, {"n", 2}, {"c", 2}, {"family", 16}, {"matching", matching_codes(s, sp, 16)}}}};
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

Json ExperimentConfig::to_json() const { return {{"pipeline", pipeline}, {"seed", seed}, {"params", params}}; }

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  ExperimentConfig c;
  c.pipeline = j.at("pipeline").get<std::string>();
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params")) c.params = j.at("params");
  return c;
}

std::pair<int, int> parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) throw std::invalid_argument("");
    std::size_t a = 0, b = 0;
    const int q = std::stoi(s.substr(0, slash), &a);
    const int l = std::stoi(s.substr(slash + 1), &b);
    if (a != slash || b != s.size() - slash - 1 || l <= 0 || q < 0 || q >= l) throw std::invalid_argument("");
    return {q, l};
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a fraction Q/L with 0 <= Q < L, got '" + s + "'");
  }
}

namespace {

// a file path, inline JSON text, or an object
Json object_param(const Json& p, const char* key) {
  if (!p.contains(key)) throw std::invalid_argument(std::string("missing '") + key + "'");
  const Json& v = p.at(key);
  if (!v.is_string()) return v;
  const auto s = v.get<std::string>();
  if (!s.empty() && s.front() == '{') return Json::parse(s);
  return read_json_file(s);
}

DevicePtr device_param(const Json& p, const char* key) { return device_from_json(object_param(p, key)); }

double omega_param(const Json& v) {
  if (v.is_number()) return wrap_unit(v.get<double>());
  const auto [q, l] = parse_fraction(v.get<std::string>());
  return static_cast<double>(q) / l;
}

SpectralOracle oracle_for(const Matrix& u, int M, int L) {
  try {
    return SpectralOracle::from_matrix(u, M, L);
  } catch (const InvalidProfile&) {
    return SpectralOracle::windowed(u, L);
  }
}

ExperimentResult run_recognize(const Json& p, const Rng& rng) {
  const DevicePtr u = device_param(p, "device");
  EigenQuery q;
  q.L = 16 * q.M;
  if (p.contains("query")) update_from_json(q, p.at("query"));
  if (p.contains("omega")) {
    const auto [num, den] = parse_fraction(p.at("omega").get<std::string>());
    if (q.L % den != 0) throw std::invalid_argument("omega denominator must divide L");
    q.omega_l = num * (q.L / den);
  }
  q.validate();
  const SpectralOracle orc = oracle_for(u->matrix(), q.M, q.L);
  const RecognitionReport r = recognize_eigenvalue(q, *u, rng, &orc);
  Json res = to_json(r, p.value("registers", false));
  return {{{"config", {{"query", to_json(q)}}}, {"result", res}}, false};
}

ExperimentResult run_thermo_pipeline(const Json& p, const Rng& rng) {
  const HamiltonianSpec h = hamiltonian_from_json(object_param(p, "hamiltonian"));
  std::vector<double> kbts;
  if (!p.contains("kbt")) throw std::invalid_argument("missing 'kbt'");
  if (p.at("kbt").is_array())
    kbts = p.at("kbt").get<std::vector<double>>();
  else
    kbts = {p.at("kbt").get<double>()};
  ThermoOptions opt;
  if (p.contains("options")) update_from_json(opt, p.at("options"));
  const ThermoReport rep = run_thermo(h, kbts, opt, rng);
  Json res = to_json(rep);
  if (p.value("csv", false)) res["table_csv"] = thermo_csv(rep);
  return {{{"config", {{"kbt", kbts}, {"options", to_json(opt)}}}, {"result", res}}, false};
}

ExperimentResult run_structure(const Json& p, const Rng& rng) {
  SpectrumSpec spec = spectrum_spec_from_json(object_param(p, "spec"));
  if (p.contains("mode")) spec.mode = match_mode_from_string(p.at("mode").get<std::string>());
  const CodeSpace sp(GateSet::by_name(p.value("gate_set", std::string("phase_grid"))), p.value("n", 2), p.value("c", 2));
  const auto family = p.value("family", std::uint64_t{0});
  const int runs = p.value("runs", 9);
  const double rho = p.value("rho", 0.5);
  StructureOptions opt;
  if (p.contains("options")) update_from_json(opt, p.at("options"));
  const StructureDecision d = find_structure_majority(spec, sp, family, runs, rho, opt, rng);
  Json res = to_json(d);
  if (d.code) res["circuit"] = circuit_to_json(sp.gate_set(), sp.decode(*d.code));
  return {{{"config",
            {{"spec", to_json(spec)},
             {"gate_set", sp.gate_set().name()},
             {"n", sp.n()},
             {"c", sp.max_length()},
             {"family", family == 0 ? sp.size() : family},
             {"runs", runs},
             {"rho", rho},
             {"options", to_json(opt)}}},
           {"result", res}},
          false};
}

ExperimentResult run_distinguish(const Json& p, const Rng& rng) {
  const DevicePtr u = device_param(p, "u"), v = device_param(p, "v");
  DistinguishOptions opt;
  if (p.contains("options")) update_from_json(opt, p.at("options"));
  if (p.contains("d")) opt.d = p.at("d").get<double>();
  if (!p.contains("omega")) throw std::invalid_argument("missing 'omega'");
  const double omega = omega_param(p.at("omega"));
  const bool lift = p.value("controlled", false);
  Json config = {{"omega", omega}, {"controlled", lift}, {"options", to_json(opt)}};
  try {
    DistinguishCase c(lift ? controlled_device(u) : u, lift ? controlled_device(v) : v, omega, opt);
    const DifferenceReport r = difference(c, rng);
    return {{{"config", config}, {"result", to_json(r)}}, r.verdict == Verdict::Indeterminate};
  } catch (const PromiseViolation& e) {
    return {{{"config", config}, {"result", {{"verdict", "indeterminate"}, {"reason", e.what()}}}}, true};
  }
}

ExperimentResult run_recognize_device(const Json& p, const Rng& rng) {
  const DevicePtr u = device_param(p, "u");
  const Json f = p.value("family", Json::object());
  const CodeSpace sp(GateSet::by_name(f.value("gate_set", std::string("involutive"))), f.value("n", 2),
                     f.value("c", 2));
  const auto count = f.value("count", std::size_t{8});
  const std::string kind = f.value("kind", std::string("involutive"));
  std::vector<std::uint64_t> codes;
  if (kind == "involutive")
    codes = involutive_family(sp, count);
  else if (kind == "distinct")
    codes = distinct_codes(sp, count);
  else
    throw std::invalid_argument("family kind must be involutive or distinct");
  std::vector<DevicePtr> family;
  for (auto c : codes) family.push_back(make_code_device(sp, c));
  DeviceSearchOptions opt;
  if (p.contains("options")) update_from_json(opt.dist, p.at("options"));
  if (p.contains("d")) opt.dist.d = p.at("d").get<double>();
  opt.controlled = p.value("controlled", true);
  if (p.contains("frequencies")) opt.frequencies = p.at("frequencies").get<std::vector<int>>();
  const int runs = p.value("runs", 9);
  const double rho = p.value("rho", 0.5);
  try {
    const DeviceDecision d = recognize_device_majority(u, family, runs, rho, opt, rng);
    Json res = to_json(d);
    res["family_code"] = d.code ? Json(codes[*d.code]) : Json(nullptr);
    return {{{"config",
              {{"family",
                {{"gate_set", sp.gate_set().name()}, {"n", sp.n()}, {"c", sp.max_length()}, {"kind", kind}, {"codes", codes}}},
               {"runs", runs},
               {"rho", rho},
               {"controlled", opt.controlled},
               {"options", to_json(opt.dist)}}},
             {"result", res}},
            false};
  } catch (const PromiseViolation& e) {
    return {{{"result", {{"verdict", "indeterminate"}, {"reason", e.what()}}}}, true};
  }
}

ExperimentResult run_verify_rev(const Json& p, const Rng& rng) {
  const int count = p.value("count", 50);
  const auto Ls = p.value("L", std::vector<int>{32, 64});
  const int max_qubits = p.value("max_qubits", 3), K = p.value("K", 16);
  const WTypeCheck w = verify_rev(count, Ls, max_qubits, K, rng.stream("rev"));
  Json rest = Json::array();
  bool pass = w.pass;
  for (int M : p.value("rest_M", std::vector<int>{4, 8}))
    for (int f : {16, 64}) {
      const RestCheck r = verify_rest(M, f * M, p.value("rest_cases", 20), rng.stream("rest", {std::uint64_t(M), std::uint64_t(f)}));
      pass = pass && r.pass;
      rest.push_back({{"M", r.M}, {"L", r.L}, {"cases", r.cases}, {"max_turning", r.max_turning},
                      {"bound", r.bound}, {"max_inverse", r.max_inverse}, {"pass", r.pass}});
    }
  return {{{"config", {{"count", count}, {"L", Ls}, {"max_qubits", max_qubits}, {"K", K}}},
           {"result",
            {{"verdict", pass ? "pass" : "fail"},
             {"w_type", {{"unitaries", w.unitaries}, {"entries", w.entries}, {"min_mass", w.min_mass},
                         {"required", 1.0 - 2.0 / K}, {"pass", w.pass}}},
             {"rest", rest}}}},
          false};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Rng rng = Rng(cfg.seed).stream(cfg.pipeline);
  const Json& p = cfg.params;
  ExperimentResult out;
  if (cfg.pipeline == "recognize-eigenvalue")
    out = run_recognize(p, rng);
  else if (cfg.pipeline == "thermo")
    out = run_thermo_pipeline(p, rng);
  else if (cfg.pipeline == "find-structure")
    out = run_structure(p, rng);
  else if (cfg.pipeline == "distinguish")
    out = run_distinguish(p, rng);
  else if (cfg.pipeline == "recognize-device")
    out = run_recognize_device(p, rng);
  else if (cfg.pipeline == "verify-rev")
    out = run_verify_rev(p, rng);
  else if (cfg.pipeline == "sweep") {
    const std::string kind = p.value("kind", std::string("recognition-N"));
    const int trials = p.value("trials", 10);
    const Json grid = p.contains("grid") ? p.at("grid") : Json(nullptr);
    out.report = {{"config", {{"kind", kind}, {"grid", grid}, {"trials", trials}}},
                  {"result", to_json(run_sweep(kind, grid, trials, rng))}};
  } else if (cfg.pipeline == "fixtures") {
    const std::string name = p.value("name", std::string());
    out.report = {{"config", {{"name", name}}}, {"result", make_fixture(name, p, rng)}};
  } else {
    throw std::invalid_argument("unknown pipeline '" + cfg.pipeline + "'");
  }
  Json report = {{"pipeline", cfg.pipeline}, {"seed", cfg.seed}};
  for (auto& [k, v] : out.report.items()) report[k] = v;
  out.report = std::move(report);
  return out;
}

}  // namespace qrec
