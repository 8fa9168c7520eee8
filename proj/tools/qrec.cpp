#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "qrec/experiments.hpp"

using namespace qrec;

namespace {

struct DeviceFlags {
  std::string file;
  std::int64_t code = -1;
  std::string gate_set = "standard";
  int n = 1, c = 1;

  void add(CLI::App* app, const std::string& flag, const std::string& what) {
    app->add_option(flag, file, what + ": circuit or matrix file");
    app->add_option("--code", code, what + ": integer circuit code (with --gate-set, --n, --c)");
    app->add_option("--gate-set", gate_set, "gate set for --code")->capture_default_str();
    app->add_option("--n", n, "qubits for --code")->capture_default_str();
    app->add_option("--c", c, "maximum circuit length for --code")->capture_default_str();
  }
  Json json() const {
    if (!file.empty()) return file;
    if (code < 0) throw std::invalid_argument("give a device file or --code");
    return Json{{"gate_set", gate_set}, {"n", n}, {"c", c}, {"code", code}};
  }
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("QREC_SEED")) return std::stoull(s);
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrec: eigenvalue recognition, structure search and device distinguishing"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_file, out_file;
  std::uint64_t seed = default_seed();
  bool dump_config = false, no_timing = false;
  app.add_option("--config", config_file, "run an experiment config file instead of a subcommand");
  app.add_option("--seed", seed, "seed (default: $QREC_SEED or 0)");
  app.add_option("-o,--out", out_file, "write the report here instead of stdout");
  app.add_flag("--dump-config", dump_config, "print the experiment config and exit");
  app.add_flag("--no-timing", no_timing, "omit wall time from the report");

  ExperimentConfig cfg;
  Json& p = cfg.params;

  // recognize-eigenvalue
  auto* rec = app.add_subcommand("recognize-eigenvalue", "is omega a frequency of U");
  DeviceFlags rec_dev;
  rec_dev.add(rec, "--circuit", "U");
  std::string rec_omega;
  EigenQuery q;
  q.L = 16 * q.M;
  std::string rec_backend = "projector", rec_rest = "inverse";
  bool rec_registers = false;
  rec->add_option("--omega", rec_omega, "candidate frequency Q/L")->required();
  rec->add_option("--M", q.M)->capture_default_str();
  rec->add_option("--L", q.L)->capture_default_str();
  rec->add_option("--copies", q.h, "concentrated registers")->capture_default_str();
  rec->add_option("--v", q.v, "ancilla copies per reflection")->capture_default_str();
  rec->add_option("--backend", rec_backend)->check(CLI::IsMember({"projector", "circuit"}))->capture_default_str();
  rec->add_option("--rest", rec_rest)->check(CLI::IsMember({"inverse", "turning"}))->capture_default_str();
  rec->add_flag("--registers", rec_registers, "include per-register records");
  rec->callback([&] {
    cfg.pipeline = "recognize-eigenvalue";
    p["device"] = rec_dev.json();
    p["omega"] = rec_omega;
    Json qj = to_json(q);
    qj["backend"] = rec_backend;
    qj["rest"] = rec_rest;
    qj.erase("omega_l");
    p["query"] = qj;
    p["registers"] = rec_registers;
  });

  // thermo
  auto* th = app.add_subcommand("thermo", "thermodynamic functions from recognized levels");
  std::string th_file, th_csv;
  std::vector<double> th_kbt;
  ThermoOptions th_opt;
  th->add_option("--hamiltonian", th_file, "matrix or level-list file")->required();
  th->add_option("--kbt", th_kbt, "temperatures (k_B T), repeatable")->required();
  th->add_option("--M", th_opt.M)->capture_default_str();
  th->add_option("--eps", th_opt.eps)->capture_default_str();
  th->add_option("--max-levels", th_opt.max_levels)->capture_default_str();
  th->add_option("--csv", th_csv, "write the temperature table as CSV");
  th->callback([&] {
    cfg.pipeline = "thermo";
    p["hamiltonian"] = th_file;
    p["kbt"] = th_kbt;
    p["options"] = to_json(th_opt);
    p["csv"] = !th_csv.empty();
  });

  // find-structure
  auto* fs = app.add_subcommand("find-structure", "find a circuit code with a given spectrum");
  std::string fs_spec, fs_gates = "phase_grid", fs_mode;
  int fs_n = 2, fs_c = 2, fs_runs = 9;
  std::uint64_t fs_family = 0;
  bool fs_oracle = false;
  fs->add_option("--spec", fs_spec, "spectrum spec file {M, L, frequencies, mode}")->required();
  fs->add_option("--gate-set", fs_gates)->capture_default_str();
  fs->add_option("--n", fs_n)->capture_default_str();
  fs->add_option("--c", fs_c)->capture_default_str();
  fs->add_option("--mode", fs_mode)->check(CLI::IsMember({"determined", "contains", "excludes"}));
  fs->add_option("--family", fs_family, "search the first T codes (0: all)")->capture_default_str();
  fs->add_option("--runs", fs_runs, "majority runs")->capture_default_str();
  fs->add_flag("--oracle-marking", fs_oracle, "mark codes with the exact spectrum");
  fs->callback([&] {
    cfg.pipeline = "find-structure";
    p["spec"] = fs_spec;
    p["gate_set"] = fs_gates;
    p["n"] = fs_n;
    p["c"] = fs_c;
    p["family"] = fs_family;
    p["runs"] = fs_runs;
    if (!fs_mode.empty()) p["mode"] = fs_mode;
    p["options"] = {{"oracle_marking", fs_oracle}};
  });

  // distinguish
  auto* di = app.add_subcommand("distinguish", "are L^U and L^V at omega the same");
  std::string di_u, di_v, di_omega, di_inv = "projector";
  DistinguishOptions di_opt;
  bool di_lift = false;
  di->add_option("--u", di_u, "U: circuit or matrix file")->required();
  di->add_option("--v", di_v, "V: circuit or matrix file")->required();
  di->add_option("--omega", di_omega, "frequency Q/L")->required();
  di->add_option("--d", di_opt.d)->capture_default_str();
  di->add_option("--M", di_opt.M)->capture_default_str();
  di->add_option("--L", di_opt.L)->capture_default_str();
  di->add_option("--inv", di_inv)->check(CLI::IsMember({"projector", "composite"}))->capture_default_str();
  di->add_flag("--controlled", di_lift, "compare the controlled forms");
  di->callback([&] {
    cfg.pipeline = "distinguish";
    p["u"] = di_u;
    p["v"] = di_v;
    p["omega"] = di_omega;
    Json o = to_json(di_opt);
    o["inv"] = di_inv;
    p["options"] = o;
    p["controlled"] = di_lift;
  });

  // recognize-device
  auto* rd = app.add_subcommand("recognize-device", "which family member is the black box");
  std::string rd_u, rd_family = "involutive,2,2", rd_kind = "involutive";
  std::size_t rd_count = 8;
  double rd_d = 0.5;
  int rd_runs = 9;
  rd->add_option("--u", rd_u, "black box: circuit or matrix file")->required();
  rd->add_option("--family", rd_family, "gate_set,n,c")->capture_default_str();
  rd->add_option("--count", rd_count, "family size")->capture_default_str();
  rd->add_option("--kind", rd_kind)->check(CLI::IsMember({"involutive", "distinct"}))->capture_default_str();
  rd->add_option("--d", rd_d)->capture_default_str();
  rd->add_option("--runs", rd_runs)->capture_default_str();
  rd->callback([&] {
    cfg.pipeline = "recognize-device";
    std::vector<std::string> parts;
    std::stringstream ss(rd_family);
    for (std::string s; std::getline(ss, s, ',');) parts.push_back(s);
    if (parts.size() != 3) throw CLI::ValidationError("--family", "expected gate_set,n,c");
    p["u"] = rd_u;
    p["family"] = {{"gate_set", parts[0]}, {"n", std::stoi(parts[1])}, {"c", std::stoi(parts[2])},
                   {"count", rd_count}, {"kind", rd_kind}};
    p["d"] = rd_d;
    p["runs"] = rd_runs;
  });

  // verify-rev
  auto* vr = app.add_subcommand("verify-rev", "check the W-type law of Rev and the Rest residual");
  int vr_count = 50, vr_qubits = 3, vr_K = 16;
  std::vector<int> vr_L{32, 64};
  vr->add_option("--count", vr_count)->capture_default_str();
  vr->add_option("--L", vr_L)->capture_default_str();
  vr->add_option("--max-qubits", vr_qubits)->capture_default_str();
  vr->add_option("--K", vr_K)->capture_default_str();
  vr->callback([&] {
    cfg.pipeline = "verify-rev";
    p = {{"count", vr_count}, {"L", vr_L}, {"max_qubits", vr_qubits}, {"K", vr_K}};
  });

  // sweep
  auto* sw = app.add_subcommand("sweep", "query-count scaling sweep with a log-log fit");
  std::string sw_kind = "recognition-N";
  std::vector<double> sw_grid;
  int sw_trials = 10;
  sw->add_option("--kind", sw_kind)
      ->check(CLI::IsMember({"recognition-N", "structure-T", "difference-d", "difference-N"}))
      ->capture_default_str();
  sw->add_option("--grid", sw_grid, "x values (qubits n, family sizes T or d)");
  sw->add_option("--trials", sw_trials)->capture_default_str();
  sw->callback([&] {
    cfg.pipeline = "sweep";
    p = {{"kind", sw_kind}, {"trials", sw_trials}};
    if (!sw_grid.empty()) {
      if (sw_kind == "difference-d")
        p["grid"] = sw_grid;
      else {
        Json g = Json::array();
        for (double x : sw_grid) g.push_back(static_cast<std::int64_t>(x));
        p["grid"] = g;
      }
    }
  });

  // fixtures
  auto* fx = app.add_subcommand("fixtures", "emit fixture files with oracle metadata");
  std::string fx_name, fx_dir;
  std::vector<std::string> fx_params;
  fx->add_option("--name", fx_name)
      ->check(CLI::IsMember({"sparse-spectrum", "equal-spectrum-pair", "involutive-family", "thermo-levels",
                             "structure-spec"}))
      ->required();
  fx->add_option("--param", fx_params, "key=value, repeatable (numbers parsed as JSON)");
  fx->add_option("--dir", fx_dir, "write the fixture files into this directory");
  fx->callback([&] {
    cfg.pipeline = "fixtures";
    p = {{"name", fx_name}};
    for (const auto& kv : fx_params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected key=value");
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      const Json parsed = Json::parse(val, nullptr, false);
      p[key] = parsed.is_discarded() ? Json(val) : parsed;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (!config_file.empty()) {
      cfg = ExperimentConfig::from_json(read_json_file(config_file));
      if (app.get_option("--seed")->count()) cfg.seed = seed;
    } else {
      if (cfg.pipeline.empty()) {
        std::cerr << app.help();
        return 1;
      }
      cfg.seed = seed;
    }
    if (dump_config) {
      std::cout << cfg.to_json().dump(2) << '\n';
      return 0;
    }

    const auto start = std::chrono::steady_clock::now();
    ExperimentResult res = run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Json& result = res.report["result"];
    if (result.contains("table_csv")) {
      if (!th_csv.empty()) write_text(th_csv, result["table_csv"].get<std::string>());
      result.erase("table_csv");
    }
    if (cfg.pipeline == "fixtures" && !fx_dir.empty()) {
      std::filesystem::create_directories(fx_dir);
      for (const auto& [name, body] : result["files"].items())
        write_json_file((std::filesystem::path(fx_dir) / name).string(), body);
      write_json_file((std::filesystem::path(fx_dir) / "fixture.json").string(), res.report);
    }
    if (!no_timing) res.report["wall_time_s"] = wall;

    if (out_file.empty())
      std::cout << res.report.dump(2) << '\n';
    else
      write_json_file(out_file, res.report);
    return res.indeterminate ? 2 : 0;
  } catch (const PromiseViolation& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
