#include "qrec/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qrec {

namespace {

template <class T>
void take(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw FormatError(std::string(what) + ": unknown key '" + k + "'");
}

Complex complex_from_json(const Json& x) {
  if (x.is_number()) return {x.get<double>(), 0.0};
  if (x.is_array() && x.size() == 2) return {x[0].get<double>(), x[1].get<double>()};
  throw FormatError("matrix entry must be a number or [re, im]");
}

Json stopping_json(const StoppingPolicy& s) { return Json{{"beta", s.beta}}; }

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << j.dump(2) << '\n';
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw FormatError("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json circuit_to_json(const GateSet& gs, const Circuit& c) {
  Json gates = Json::array();
  for (const auto& g : c.gates) gates.push_back({{"name", gs[g.gate].name}, {"targets", g.targets}});
  return {{"n", c.n}, {"gate_set", gs.name()}, {"gates", gates}};
}

Circuit circuit_from_json(const Json& j, const GateSet& gs) {
  reject_unknown(j, {"n", "gate_set", "gates"}, "circuit");
  Circuit c;
  c.n = j.at("n").get<int>();
  for (const auto& g : j.at("gates")) {
    GateOp op;
    op.gate = gs.index_of(g.at("name").get<std::string>());
    op.targets = g.at("targets").get<std::vector<int>>();
    c.gates.push_back(std::move(op));
  }
  validate(gs, c);
  return c;
}

DevicePtr device_from_json(const Json& j) {
  if (j.contains("matrix")) return make_matrix_device(matrix_from_json(j.at("matrix")));
  if (j.contains("code")) {
    reject_unknown(j, {"gate_set", "n", "c", "code"}, "code device");
    const CodeSpace sp(GateSet::by_name(j.at("gate_set").get<std::string>()), j.at("n").get<int>(),
                       j.at("c").get<int>());
    const auto code = j.at("code").get<std::uint64_t>();
    if (code >= sp.size()) throw FormatError("code out of range");
    return make_code_device(sp, code);
  }
  if (j.contains("gates")) {
    const GateSet gs = GateSet::by_name(j.at("gate_set").get<std::string>());
    return make_circuit_device(gs, circuit_from_json(j, gs));
  }
  throw FormatError("device file needs 'matrix', 'gates' or 'code'");
}

DevicePtr load_device(const std::string& path) { return device_from_json(read_json_file(path)); }

HamiltonianSpec hamiltonian_from_json(const Json& j) {
  if (j.contains("matrix")) return HamiltonianSpec::from_matrix(matrix_from_json(j.at("matrix")));
  if (j.contains("levels")) {
    std::vector<Level> levels;
    for (const auto& l : j.at("levels")) levels.push_back({l.at("energy").get<double>(), l.value("degeneracy", 1)});
    return HamiltonianSpec::from_levels(std::move(levels));
  }
  throw FormatError("hamiltonian file needs 'matrix' or 'levels'");
}

Json levels_to_json(const std::vector<Level>& levels) {
  Json out = Json::array();
  for (const auto& l : levels) out.push_back({{"energy", l.energy}, {"degeneracy", l.degeneracy}});
  return out;
}

SpectrumSpec spectrum_spec_from_json(const Json& j) {
  reject_unknown(j, {"M", "L", "frequencies", "mode"}, "spectrum spec");
  SpectrumSpec s;
  take(j, "M", s.M);
  take(j, "L", s.L);
  s.frequencies = j.at("frequencies").get<std::vector<int>>();
  if (j.contains("mode")) s.mode = match_mode_from_string(j.at("mode").get<std::string>());
  s.validate();
  return s;
}

Json to_json(const SpectrumSpec& s) {
  return {{"M", s.M}, {"L", s.L}, {"frequencies", s.frequencies}, {"mode", to_string(s.mode)}};
}

FrequencyTable frequency_table_from_json(const Json& j) {
  reject_unknown(j, {"M", "L", "provenance", "table"}, "frequency table");
  FrequencyTable t;
  t.M = j.at("M").get<int>();
  t.L = j.at("L").get<int>();
  t.provenance = Provenance::Injected;
  if (j.contains("provenance")) t.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  for (const auto& [k, v] : j.at("table").items()) {
    const int l = std::stoi(k);
    if (l < 0 || l >= t.M) throw FormatError("table index out of range: " + k);
    const int h = v.get<int>();
    if (h < 0 || h >= t.L) throw FormatError("table value out of range");
    t.entries[l] = {h, static_cast<double>(h) / t.L};
  }
  return t;
}

Json to_json(const FrequencyTable& t) {
  Json table = Json::object();
  for (const auto& [l, e] : t.entries) table[std::to_string(l)] = e.h;
  return {{"M", t.M}, {"L", t.L}, {"provenance", to_string(t.provenance)}, {"table", table}};
}

Json to_json(const EigenQuery& q) {
  return {{"omega_l", q.omega_l}, {"M", q.M},           {"L", q.L},
          {"v", q.v},             {"h", q.h},           {"backend", to_string(q.backend)},
          {"accept_rho", q.accept_rho}, {"sign_rho", q.sign_rho}, {"stopping", stopping_json(q.stopping)},
          {"rest", to_string(q.rest)}};
}

void update_from_json(EigenQuery& q, const Json& j) {
  reject_unknown(j, {"omega_l", "M", "L", "v", "h", "backend", "accept_rho", "sign_rho", "stopping", "rest"},
                 "recognition config");
  take(j, "omega_l", q.omega_l);
  take(j, "M", q.M);
  take(j, "L", q.L);
  take(j, "v", q.v);
  take(j, "h", q.h);
  if (j.contains("backend")) q.backend = backend_from_string(j.at("backend").get<std::string>());
  take(j, "accept_rho", q.accept_rho);
  take(j, "sign_rho", q.sign_rho);
  if (j.contains("stopping")) take(j.at("stopping"), "beta", q.stopping.beta);
  if (j.contains("rest")) q.rest = rest_kind_from_string(j.at("rest").get<std::string>());
}

Json to_json(const ThermoOptions& o) {
  return {{"M", o.M},
          {"h", o.h},
          {"v", o.v},
          {"eps", o.eps},
          {"span", o.span},
          {"max_levels", o.max_levels},
          {"weight_cutoff", o.weight_cutoff},
          {"counting", {{"registers", o.counting.registers}, {"horizon_factor", o.counting.horizon_factor}}}};
}

void update_from_json(ThermoOptions& o, const Json& j) {
  reject_unknown(j, {"M", "h", "v", "eps", "span", "max_levels", "weight_cutoff", "counting"}, "thermo config");
  take(j, "M", o.M);
  take(j, "h", o.h);
  take(j, "v", o.v);
  take(j, "eps", o.eps);
  take(j, "span", o.span);
  take(j, "max_levels", o.max_levels);
  take(j, "weight_cutoff", o.weight_cutoff);
  if (j.contains("counting")) {
    take(j.at("counting"), "registers", o.counting.registers);
    take(j.at("counting"), "horizon_factor", o.counting.horizon_factor);
  }
}

Json to_json(const StructureOptions& o) {
  return {{"copies", o.copies},
          {"registers", o.registers},
          {"rho_copies", o.rho_copies},
          {"rho_registers", o.rho_registers},
          {"v", o.v},
          {"backend", to_string(o.backend)},
          {"stopping", stopping_json(o.stopping)},
          {"oracle_marking", o.oracle_marking},
          {"attempts", o.attempts},
          {"max_codes", o.max_codes}};
}

void update_from_json(StructureOptions& o, const Json& j) {
  reject_unknown(j,
                 {"copies", "registers", "rho_copies", "rho_registers", "v", "backend", "stopping", "oracle_marking",
                  "attempts", "max_codes"},
                 "structure config");
  take(j, "copies", o.copies);
  take(j, "registers", o.registers);
  take(j, "rho_copies", o.rho_copies);
  take(j, "rho_registers", o.rho_registers);
  take(j, "v", o.v);
  if (j.contains("backend")) o.backend = backend_from_string(j.at("backend").get<std::string>());
  if (j.contains("stopping")) take(j.at("stopping"), "beta", o.stopping.beta);
  take(j, "oracle_marking", o.oracle_marking);
  take(j, "attempts", o.attempts);
  take(j, "max_codes", o.max_codes);
}

Json to_json(const DistinguishOptions& o) {
  return {{"M", o.M},
          {"L", o.L},
          {"d", o.d},
          {"v", o.v},
          {"check_copies", o.check_copies},
          {"check_weight", o.check_weight},
          {"almost_orthogonal", o.almost_orthogonal},
          {"closed_registers", o.closed_registers},
          {"closed_copies", o.closed_copies},
          {"closed_rho", o.closed_rho},
          {"sig_rho", o.sig_rho},
          {"gen_registers", o.gen_registers},
          {"change_rho", o.change_rho},
          {"narrow_far", o.narrow_far},
          {"ort_far", o.ort_far},
          {"gap_lo", o.gap_lo},
          {"gap_hi", o.gap_hi},
          {"gap_retries", o.gap_retries},
          {"inv", o.inv == InvBackend::Projector ? "projector" : "composite"},
          {"stopping", stopping_json(o.stopping)}};
}

void update_from_json(DistinguishOptions& o, const Json& j) {
  reject_unknown(j,
                 {"M", "L", "d", "v", "check_copies", "check_weight", "almost_orthogonal", "closed_registers",
                  "closed_copies", "closed_rho", "sig_rho", "gen_registers", "change_rho", "narrow_far", "ort_far",
                  "gap_lo", "gap_hi", "gap_retries", "inv", "stopping"},
                 "distinguish config");
  take(j, "M", o.M);
  take(j, "L", o.L);
  take(j, "d", o.d);
  take(j, "v", o.v);
  take(j, "check_copies", o.check_copies);
  take(j, "check_weight", o.check_weight);
  take(j, "almost_orthogonal", o.almost_orthogonal);
  take(j, "closed_registers", o.closed_registers);
  take(j, "closed_copies", o.closed_copies);
  take(j, "closed_rho", o.closed_rho);
  take(j, "sig_rho", o.sig_rho);
  take(j, "gen_registers", o.gen_registers);
  take(j, "change_rho", o.change_rho);
  take(j, "narrow_far", o.narrow_far);
  take(j, "ort_far", o.ort_far);
  take(j, "gap_lo", o.gap_lo);
  take(j, "gap_hi", o.gap_hi);
  take(j, "gap_retries", o.gap_retries);
  if (j.contains("inv")) {
    const auto s = j.at("inv").get<std::string>();
    if (s == "projector")
      o.inv = InvBackend::Projector;
    else if (s == "composite")
      o.inv = InvBackend::Composite;
    else
      throw FormatError("unknown inv backend '" + s + "'");
  }
  if (j.contains("stopping")) take(j.at("stopping"), "beta", o.stopping.beta);
}

Json to_json(const QueryCounter& c) {
  Json out = Json::object();
  for (const auto& [k, n] : c.counts()) out[k] = n;
  return out;
}

Json to_json(const RecognitionReport& r, bool registers) {
  Json out = {{"verdict", r.verdict ? "accept" : "reject"},
              {"fraction", r.fraction},
              {"matches", r.matches},
              {"queries", {{"U", r.queries}}},
              {"seed", r.seed},
              {"params", to_json(r.query)}};
  if (registers) {
    Json regs = Json::array();
    for (const auto& k : r.registers) {
      Json e = {{"t", k.t}, {"readout", k.readout}, {"match", k.match}, {"match_mass", k.match_mass}};
      if (!std::isnan(k.overlap)) e["overlap"] = k.overlap;
      regs.push_back(std::move(e));
    }
    out["registers"] = std::move(regs);
  }
  return out;
}

Json to_json(const ThermoReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"anchor", l.anchor},
                      {"omega", l.omega},
                      {"energy", l.energy},
                      {"degeneracy", l.degeneracy},
                      {"bracket", {l.bracket_lo, l.bracket_hi}},
                      {"fraction", l.fraction},
                      {"queries", l.queries}});
  Json results = Json::array();
  for (const auto& t : r.results)
    results.push_back({{"kbt", t.kbt},
                       {"Q", t.Q},
                       {"mean_energy", t.mean_energy},
                       {"entropy", t.entropy},
                       {"truncation_bound", t.truncation_bound},
                       {"levels_used", t.levels.size()}});
  return {{"map", {{"top", r.map.top}, {"width", r.map.width}, {"span", r.map.span}}},
          {"levels", levels},
          {"results", results},
          {"queries", {{"U", r.queries}}}};
}

Json to_json(const MatchVerdict& v) {
  Json ev = Json::array();
  for (const auto& e : v.evidence)
    ev.push_back({{"l", e.l}, {"in_spec", e.in_spec}, {"found", e.found}, {"bad", e.bad},
                  {"fractions", e.fractions}, {"queries", e.queries}});
  return {{"matches", v.matches}, {"bad", v.bad}, {"evidence", ev}, {"off_grid", v.off_grid}, {"queries", v.queries}};
}

Json to_json(const StructureReport& r) {
  Json out = {{"found", r.code.has_value()}};
  out["code"] = r.code ? Json(*r.code) : Json(nullptr);
  out["family"] = r.family;
  out["attempts"] = r.attempts;
  out["sampled"] = r.sampled;
  out["marked_evaluations"] = r.marked_evaluations;
  out["verifications"] = r.verifications;
  out["queries"] = {{"U", r.queries}, {"code_reflection", r.marked_evaluations}};
  out["seed"] = r.seed;
  return out;
}

Json to_json(const StructureDecision& d) {
  Json runs = Json::array();
  for (const auto& r : d.reports) runs.push_back(to_json(r));
  Json out = {{"verdict", d.code ? "found" : "not-found"}};
  out["code"] = d.code ? Json(*d.code) : Json(nullptr);
  out["runs"] = d.runs;
  out["found_runs"] = d.found;
  out["rho"] = d.rho;
  out["reports"] = std::move(runs);
  return out;
}

Json to_json(const Subspaces& s) {
  return {{"dim_u", s.dim_u()},   {"dim_v", s.dim_v()},        {"dim_common", s.common.cols()},
          {"dim_prime", s.prime.cols()}, {"mu_u", s.mu_u},     {"mu_v", s.mu_v},
          {"coincident", s.coincident},  {"u_cos", s.u_cos},   {"v_cos", s.v_cos}};
}

Json to_json(const DifferenceReport& r) {
  Json ev = Json::array();
  for (const auto& e : r.evidence)
    ev.push_back({{"name", e.name}, {"fraction", e.fraction}, {"flag", e.flag}, {"in_gap", e.in_gap},
                  {"retries", e.retries}, {"residual", e.residual}});
  const AncillaFlags& f = r.flags;
  return {{"verdict", to_string(r.verdict)},
          {"flags",
           {{"alpha_dif", f.alpha_dif}, {"clean", f.clean()}}},
          {"evidence", ev},
          {"dim_u", r.dim_u},
          {"dim_v", r.dim_v},
          {"mu_u", r.mu_u},
          {"mu_v", r.mu_v},
          {"queries", {{"U", r.queries_u}, {"V", r.queries_v}}},
          {"seed", r.seed}};
}

Json to_json(const DeviceReport& r) {
  Json out = {{"found", r.code.has_value()}};
  out["code"] = r.code ? Json(*r.code) : Json(nullptr);
  out["family"] = r.family;
  out["attempts"] = r.attempts;
  out["sampled"] = r.sampled;
  out["marked_evaluations"] = r.marked_evaluations;
  out["verifications"] = r.verifications;
  out["queries"] = {{"U", r.queries}};
  out["seed"] = r.seed;
  return out;
}

Json to_json(const DeviceDecision& d) {
  Json runs = Json::array();
  for (const auto& r : d.reports) runs.push_back(to_json(r));
  Json out = {{"verdict", d.code ? "found" : "not-found"}};
  out["code"] = d.code ? Json(*d.code) : Json(nullptr);
  out["runs"] = d.runs;
  out["found_runs"] = d.found;
  out["reports"] = std::move(runs);
  return out;
}

std::string thermo_csv(const ThermoReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "kbt,Q,mean_energy,entropy,heat_capacity_fd\n";
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const auto& t = r.results[i];
    out << t.kbt << ',' << t.Q << ',' << t.mean_energy << ',' << t.entropy << ',';
    // central difference of <E> over neighbouring temperatures
    if (i > 0 && i + 1 < r.results.size())
      out << (r.results[i + 1].mean_energy - r.results[i - 1].mean_energy) / (r.results[i + 1].kbt - r.results[i - 1].kbt);
    out << '\n';
  }
  return out.str();
}

}  // namespace qrec
