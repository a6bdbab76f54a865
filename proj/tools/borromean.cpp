#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "borromean/io.hpp"
#include "borromean/optimize.hpp"

using namespace borromean;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kConvergence = 3, kIo = 4 };

struct Common {
  std::string atom_data;
  std::string out_dir = ".";
  bool force = false;
  int workers = 1;
  bool no_decay = false;
};

struct Point {
  std::string mode = "three-atom";
  double e = 0.11912;
  double b = 3.5;
  double r = 12.5;
  double tau = 2.42;
};

json atom_json(const AtomModel& m) {
  return {{"path", m.source}, {"name", m.name}, {"version", m.version}, {"checksum_fnv1a", m.checksum}};
}

json base_manifest(const std::string& cmd, const Common& c, const AtomModel& m, json config) {
  config["with_decay"] = !c.no_decay;
  config["workers"] = c.workers;
  return {{"tool", "borromean"},
          {"version", BORROMEAN_VERSION},
          {"command", cmd},
          {"config", config},
          {"atom_data", atom_json(m)},
          {"conventions",
           {{"energy", "MHz, ordinary frequency; propagator exp(-i 2 pi H t), t in us"},
            {"magnetic_field", "signed; positive = antiparallel to the dc electric field (B_z = -B)"},
            {"phase", "initial-state phase with non-interacting Stark+Zeeman phase removed"},
            {"units", "E V/cm, B G, R um, t us"}}}};
}

void emit(const Common& c, const std::string& name, const std::string& content) {
  write_file(fs::path(c.out_dir) / name, content, c.force);
}

void check_point(const Point& p) {
  if (!(p.r > 0)) throw ConfigError("--R must be positive");
  if (!(p.tau >= 0)) throw ConfigError("--tau must be >= 0");
  if (!(p.e >= 0) || p.e > 10) throw ConfigError("--E must be in [0, 10] V/cm");
  if (std::abs(p.b) > 100) throw ConfigError("--B must be within +-100 G");
  if (p.mode != "three-atom" && p.mode != "two-atom") throw ConfigError("--mode must be three-atom or two-atom");
}

json point_json(const Point& p) {
  return {{"mode", p.mode}, {"E_Vcm", p.e}, {"B_G", p.b}, {"R_um", p.r}, {"tau_us", p.tau}};
}

// Fig. 2(a) style two-atom runs use |r> and |r''> at distance R.
ExcitationPattern mode_pattern(const std::string& mode) {
  return ExcitationPattern::parse(mode == "two-atom" ? "rgr" : "rrr");
}

OperatingPoint to_op(const Point& p, const std::string& mode) {
  // in two-atom mode R is the pair distance; the rgr pattern places the atoms at 2R
  const double r = mode == "two-atom" ? 0.5 * p.r : p.r;
  return {p.e, p.b, r, p.tau};
}

void add_point_options(CLI::App* app, Point& p, bool with_mode) {
  if (with_mode) app->add_option("--mode", p.mode, "three-atom or two-atom")->capture_default_str();
  app->add_option("--E", p.e, "dc electric field, V/cm")->capture_default_str();
  app->add_option("--B", p.b, "magnetic field, G (positive = antiparallel to E)")->capture_default_str();
  app->add_option("--R", p.r, "interatomic spacing, um")->capture_default_str();
  app->add_option("--tau", p.tau, "interaction time, us")->capture_default_str();
}

std::string trace_csv(const Trace& tr, const json& manifest) {
  CsvTable t{{"t_us", "p", "phase_rad", "f", "norm"}, {}};
  for (const auto& pt : tr.points)
    t.add_row({format_double(pt.t_us), format_double(pt.p), format_double(pt.phase), format_double(pt.f),
               format_double(pt.norm)});
  return t.render(manifest);
}

std::vector<double> time_grid(double tau, int points) {
  if (tau <= 0) return {};
  return linspace(tau / points, tau, points);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-atom Rydberg Forster resonances and Toffoli gate simulator"};
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");
  app.require_subcommand(1);
  Common c;
  app.add_option("--atom-data", c.atom_data, "atomic constants JSON (default: $BORROMEAN_ATOM_DATA or shipped file)");
  app.add_option("--out", c.out_dir, "output directory")->capture_default_str();
  app.add_flag("--force", c.force, "overwrite existing output files");
  app.add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_flag("--no-decay", c.no_decay, "disable Rydberg decay");

  Point pt;
  // basis
  auto* cmd_basis = app.add_subcommand("basis", "enumerate a collective basis");
  std::string basis_pattern = "rrr";
  double cutoff = 1000.0;
  bool dump_h = false;
  cmd_basis->add_option("--pattern", basis_pattern, "excited atoms, e.g. rrr or r_g_r")->capture_default_str();
  cmd_basis->add_option("--cutoff", cutoff, "zero-field defect cutoff, MHz")->capture_default_str();
  cmd_basis->add_flag("--dump-hamiltonian", dump_h, "also write nonzero Hamiltonian entries");
  add_point_options(cmd_basis, pt, false);

  // scan
  auto* cmd_scan = app.add_subcommand("scan", "dc electric field scan of the 80S fraction f");
  double e_min = 0.110, e_max = 0.130;
  int points = 600;
  add_point_options(cmd_scan, pt, true);
  cmd_scan->add_option("--E-min", e_min, "V/cm")->capture_default_str();
  cmd_scan->add_option("--E-max", e_max, "V/cm")->capture_default_str();
  cmd_scan->add_option("--points", points, "grid points")->check(CLI::Range(1, 1000000))->capture_default_str();

  // trace
  auto* cmd_trace = app.add_subcommand("trace", "population/phase trace of the initial state");
  int trace_points = 400;
  add_point_options(cmd_trace, pt, true);
  cmd_trace->add_option("--points", trace_points, "time points")->check(CLI::Range(1, 1000000))->capture_default_str();

  // phases
  auto* cmd_phases = app.add_subcommand("phases", "trace for one excitation pattern");
  std::string pattern = "rrr";
  add_point_options(cmd_phases, pt, false);
  cmd_phases->add_option("--pattern", pattern, "r_r_r, r_g_r, g_r_r, r_r_g, ...")->capture_default_str();
  cmd_phases->add_option("--points", trace_points, "time points")->check(CLI::Range(1, 1000000))->capture_default_str();

  auto* cmd_tt = app.add_subcommand("truth-table", "8x8 truth table");
  add_point_options(cmd_tt, pt, false);
  auto* cmd_fid = app.add_subcommand("fidelity", "average fidelity over 216 product inputs");
  add_point_options(cmd_fid, pt, false);

  auto* cmd_opt = app.add_subcommand("optimize", "operating-point search, steps I-IV");
  OptimizerConfig ocfg;
  cmd_opt->add_option("--R", ocfg.r_um, "interatomic spacing, um")->capture_default_str();
  cmd_opt->add_option("--tau-max", ocfg.tau_max_us, "lifetime guard on tau, us")->capture_default_str();
  cmd_opt->add_option("--max-iter", ocfg.max_iterations, "II-IV iterations")->capture_default_str();
  cmd_opt->add_option("--B-max", ocfg.b_max, "upper end of the B search, G")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    const std::string data_path = c.atom_data.empty() ? default_atom_data_path() : c.atom_data;
    AtomicPhysics physics(load_atom_model(data_path));
    const auto& model = physics.model();
    GateModel gate(physics, !c.no_decay);

    if (*cmd_basis) {
      const auto pat = ExcitationPattern::parse(basis_pattern);
      if (pat.count() < 2) throw ConfigError("basis pattern needs at least two excited atoms");
      std::vector<RydbergLevel> atoms;
      const RydbergLevel lv[3] = {level_r(), level_r1(), level_r2()};
      for (int i = 0; i < 3; ++i)
        if (pat.excited[i]) atoms.push_back(lv[i]);
      const auto basis = build_basis(atoms, scheme_manifolds(), cutoff, model);
      auto man = base_manifest("basis", c, model, {{"pattern", pat.key()}, {"cutoff_MHz", cutoff}});
      man["basis_hash"] = basis.hash();
      man["states"] = basis.size();
      emit(c, "basis.csv", "# manifest: " + man.dump() + "\n" + basis_csv(basis));
      emit(c, "basis.json", man.dump(2) + "\n");
      if (dump_h) {
        OperatingPoint op{pt.e, pt.b, pt.r, pt.tau};
        const auto sys = gate.system(pat, op);
        const auto h = assemble(*sys.basis, sys.couplings, sys.fields, physics, !c.no_decay);
        man["config"]["point"] = point_json(pt);
        emit(c, "hamiltonian.csv", "# manifest: " + man.dump() + "\n" + hamiltonian_csv(h, *sys.basis));
      }
      std::printf("%zu states, hash %s\n", basis.size(), basis.hash().c_str());
      return kOk;
    }

    if (*cmd_scan) {
      check_point(pt);
      if (!(e_max >= e_min) || e_min < 0) throw ConfigError("need 0 <= --E-min <= --E-max");
      if (!(pt.tau > 0)) throw ConfigError("--tau must be positive for a scan");
      const int n = (e_min == e_max) ? 1 : points;
      const auto grid = linspace(e_min, e_max, n);
      const auto op = to_op(pt, pt.mode);
      const auto sys = gate.system(mode_pattern(pt.mode), op);
      const auto rows = field_scan(grid, sys.fields, pt.tau, *sys.basis, sys.couplings, physics, !c.no_decay,
                                   c.workers);
      json cfg = point_json(pt);
      cfg.erase("E_Vcm");
      cfg["E_min_Vcm"] = e_min;
      cfg["E_max_Vcm"] = e_max;
      cfg["points"] = n;
      auto man = base_manifest("scan", c, model, cfg);
      man["basis_hash"] = sys.basis->hash();
      CsvTable t{{"E_Vcm", "f", "p", "norm", "error"}, {}};
      int failed = 0;
      for (const auto& r : rows) {
        if (!r.error.empty()) {
          ++failed;
          std::cerr << "point E=" << r.e_v_cm << " failed: " << r.error << "\n";
        }
        t.add_row({format_double(r.e_v_cm, 12), format_double(r.f), format_double(r.p), format_double(r.norm),
                   r.error});
      }
      emit(c, "scan.csv", t.render(man));
      man["failed_points"] = failed;
      emit(c, "scan.json", man.dump(2) + "\n");
      return kOk;
    }

    if (*cmd_trace || *cmd_phases) {
      check_point(pt);
      const bool phases = cmd_phases->parsed();
      const auto pat = phases ? ExcitationPattern::parse(pattern) : mode_pattern(pt.mode);
      const auto op = phases ? OperatingPoint{pt.e, pt.b, pt.r, pt.tau} : to_op(pt, pt.mode);
      const auto tr = gate.pattern_trace(pat, op, time_grid(pt.tau, trace_points));
      json cfg = point_json(pt);
      cfg["points"] = trace_points;
      if (phases) {
        cfg.erase("mode");
        cfg["pattern"] = pat.key();
      }
      auto man = base_manifest(phases ? "phases" : "trace", c, model, cfg);
      if (pat.count() >= 2) man["basis_hash"] = gate.basis_for(pat).hash();
      const std::string stem = phases ? "phases_" + pat.key() : "trace";
      emit(c, stem + ".csv", trace_csv(tr, man));
      emit(c, stem + ".json", man.dump(2) + "\n");
      return kOk;
    }

    if (*cmd_tt || *cmd_fid) {
      check_point(pt);
      const OperatingPoint op{pt.e, pt.b, pt.r, pt.tau};
      const auto table = gate.amplitude_table(op);
      json cfg = point_json(pt);
      cfg.erase("mode");
      json amps = json::array();
      for (int i = 0; i < 8; ++i)
        amps.push_back({{"input", i},
                        {"pattern", ExcitationPattern::from_index(i).key()},
                        {"re", table[i].amplitude.real()},
                        {"im", table[i].amplitude.imag()},
                        {"population", table[i].population()},
                        {"phase_rad", std::arg(table[i].amplitude)}});
      if (*cmd_tt) {
        const auto tt = truth_table(table);
        auto man = base_manifest("truth-table", c, model, cfg);
        CsvTable t{{"input", "out0", "out1", "out2", "out3", "out4", "out5", "out6", "out7", "leakage", "decay"}, {}};
        json raw = json::array(), ren = json::array();
        for (int i = 0; i < 8; ++i) {
          std::vector<std::string> row{std::to_string(i)};
          json r1 = json::array(), r2 = json::array();
          for (int o = 0; o < 8; ++o) {
            row.push_back(format_double(tt.raw(i, o)));
            r1.push_back(tt.raw(i, o));
            r2.push_back(tt.renormalized(i, o));
          }
          row.push_back(format_double(tt.leakage[i]));
          row.push_back(format_double(tt.decay_loss[i]));
          t.add_row(row);
          raw.push_back(r1);
          ren.push_back(r2);
        }
        json out = {{"manifest", man},
                    {"raw", raw},
                    {"renormalized", ren},
                    {"leakage", tt.leakage},
                    {"decay_loss", tt.decay_loss},
                    {"return_amplitudes", amps}};
        emit(c, "truth_table.csv", t.render(man));
        emit(c, "truth_table.json", out.dump(2) + "\n");
        for (int i = 0; i < 8; ++i) {
          for (int o = 0; o < 8; ++o) std::printf("%7.4f", tt.raw(i, o));
          std::printf("\n");
        }
      } else {
        const auto rep = average_fidelity(table, c.workers);
        auto man = base_manifest("fidelity", c, model, cfg);
        CsvTable t{{"input", "atom1", "atom2", "atom3", "fidelity"}, {}};
        static const char* names[6] = {"0", "1", "+", "-", "+i", "-i"};
        for (int n = 0; n < 216; ++n)
          t.add_row({std::to_string(n), names[n / 36], names[(n / 6) % 6], names[n % 6],
                     format_double(rep.per_input[n], 12)});
        json out = {{"manifest", man},
                    {"average_fidelity", rep.average},
                    {"protocol_duration_us", protocol_duration_us(op)},
                    {"return_amplitudes", amps}};
        emit(c, "fidelity.csv", t.render(man));
        emit(c, "fidelity.json", out.dump(2) + "\n");
        std::printf("average fidelity %.6f\n", rep.average);
      }
      return kOk;
    }

    if (*cmd_opt) {
      ocfg.workers = c.workers;
      const auto res = optimize_operating_point(gate, ocfg);
      json cfg = {{"R_um", ocfg.r_um}, {"tau_max_us", ocfg.tau_max_us}, {"max_iterations", ocfg.max_iterations},
                  {"B_max_G", ocfg.b_max}};
      auto man = base_manifest("optimize", c, model, cfg);
      CsvTable t{{"iteration", "step", "E_Vcm", "B_G", "tau_us", "res_exchange", "res_two_body", "res_three_body",
                  "fidelity"},
                 {}};
      for (const auto& l : res.log)
        t.add_row({std::to_string(l.iteration), l.step, format_double(l.op.e_v_cm, 12), format_double(l.op.b_gauss),
                   format_double(l.op.tau_us), format_double(l.residual_exchange),
                   format_double(l.residual_two_body), format_double(l.residual_three_body),
                   format_double(l.fidelity)});
      json out = {{"manifest", man},
                  {"converged", res.converged},
                  {"message", res.message},
                  {"E_Vcm", res.op.e_v_cm},
                  {"B_G", res.op.b_gauss},
                  {"R_um", res.op.r_um},
                  {"tau_us", res.op.tau_us},
                  {"fidelity", res.fidelity},
                  {"two_body_peak_Vcm", res.two_body_peak_v_cm},
                  {"three_body_peak_Vcm", res.three_body_peak_v_cm},
                  {"three_body_width_Vcm", res.three_body_width_v_cm}};
      emit(c, "optimize_log.csv", t.render(man));
      emit(c, "optimize.json", out.dump(2) + "\n");
      std::printf("%s: E=%.6f V/cm B=%.4f G tau=%.4f us fidelity=%.4f\n", res.message.c_str(), res.op.e_v_cm,
                  res.op.b_gauss, res.op.tau_us, res.fidelity);
      return res.converged ? kOk : kConvergence;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
