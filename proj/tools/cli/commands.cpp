#include "commands.hpp"

#include "config.hpp"
#include "csv.hpp"
#include "manifest.hpp"
#include "presets.hpp"
#include "rydchip/cavity_model.hpp"
#include "rydchip/dressed_trap.hpp"
#include "rydchip/field_model.hpp"
#include "rydchip/master_equation.hpp"
#include "rydchip/trajectory.hpp"
#include "rydchip/transfer.hpp"
#include "rydchip/units.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>

namespace rydchip::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return exit_code::kConfig;
    case ErrorKind::NoTrap:
      return exit_code::kNoTrap;
    case ErrorKind::Cutoff:
      return exit_code::kCutoff;
    case ErrorKind::UnboundedOptimum:
      return exit_code::kOptimizer;
    case ErrorKind::Domain:
    case ErrorKind::Singular:
    case ErrorKind::NoCrossing:
    case ErrorKind::CrossingBelowSurface:
    case ErrorKind::Colocation:
    case ErrorKind::Regime:
    case ErrorKind::OracleScope:
      return exit_code::kDomain;
  }
  return exit_code::kInternal;
}

namespace {

constexpr int kDefaultTrajectories = 5000;
constexpr std::uint64_t kDefaultSeed = 1;

json to_json(const FieldConfig& f) {
  return {{"disk_radius", f.disk_radius},
          {"charge_density", f.charge_density},
          {"F0", f.F0},
          {"zeta", f.zeta},
          {"F_bias", f.F_bias}};
}

json to_json(const DressingPair& p) {
  json j = {{"d_main", p.d_main}, {"d_aux", p.d_aux}, {"detuning", p.detuning}, {"rabi", p.rabi}};
  j["omega_res"] = p.omega_res ? json(*p.omega_res) : json(nullptr);
  return j;
}

json to_json(const TrapParams& t) {
  return {{"z_min", t.z_min},         {"z_cross", t.z_cross}, {"force_constant", t.force_constant},
          {"vib_freq", t.vib_freq},   {"vib_freq_hz", t.vib_freq_hz()}, {"width_nm", t.width},
          {"E_min", t.E_min},         {"atom_mass", t.atom_mass}};
}

json to_json(const CavityGateConfig& c) {
  json j = {{"g", c.g},         {"delta_c", c.delta_c}, {"kappa", c.kappa},
            {"gamma", c.gamma}, {"n_th", c.n_th},       {"n_max", c.cutoff()},
            {"omega_c", c.omega_c}};
  if (c.geometry) j["geometry"] = {{"length_cm", c.geometry->length_cm}, {"gap_um", c.geometry->gap_um}};
  return j;
}

json raw_entries(const Config& cfg) {
  json j = json::object();
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

AxisRange read_axis(const Config& cfg, const std::string& axis) {
  AxisRange r;
  r.lo = cfg.number("grid." + axis + "_lo");
  r.hi = cfg.number("grid." + axis + "_hi");
  r.n = static_cast<int>(cfg.integer("grid.n_" + axis));
  return r;
}

FieldModel parse_model(const std::string& name) {
  if (name == "disk") return FieldModel::Disk;
  if (name == "exponential") return FieldModel::Exponential;
  throw Error(ErrorKind::Config, "unknown field model '" + name + "' (expected disk or exponential)");
}

struct BiasScan {
  double lo;
  double hi;
  int n;
};

BiasScan parse_scan(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos) throw Error(ErrorKind::Config, "--scan-bias expects lo:hi:n, got '" + spec + "'");
  BiasScan s;
  s.lo = parse_number(spec.substr(0, a));
  s.hi = parse_number(spec.substr(a + 1, b - a - 1));
  const double n = parse_number(spec.substr(b + 1));
  if (n < 1 || n != std::floor(n)) throw Error(ErrorKind::Config, "--scan-bias point count must be a positive integer");
  s.n = static_cast<int>(n);
  return s;
}

std::uint64_t resolve_seed(const RunOptions& opt, const Config& cfg) {
  if (opt.seed) return *opt.seed;
  if (auto s = cfg.integer_if("gate.seed")) {
    if (*s < 0) throw Error(ErrorKind::Config, "gate.seed must be >= 0");
    return static_cast<std::uint64_t>(*s);
  }
  return kDefaultSeed;
}

int resolve_trajectories(const RunOptions& opt, const Config& cfg) {
  long long m = kDefaultTrajectories;
  if (opt.trajectories) {
    m = *opt.trajectories;
  } else if (auto v = cfg.integer_if("gate.trajectories")) {
    m = *v;
  }
  if (m < 1) throw Error(ErrorKind::Config, "trajectory count must be >= 1");
  return static_cast<int>(m);
}

std::vector<double> resolve_nth_list(const RunOptions& opt, const Config& cfg) {
  std::vector<double> list = opt.nth_list ? parse_number_list(*opt.nth_list) : cfg.numbers("gate.nth_list");
  for (double n : list) {
    if (!(n >= 0.0)) throw Error(ErrorKind::Config, "thermal occupations must be >= 0");
  }
  return list;
}

// Runs `body` with a manifest in `opt.out`, mapping library errors to exit
// codes. The manifest is on disk (incomplete) before `body` writes any data.
int guarded(const RunOptions& opt, const std::string& command,
            const std::function<int(RunManifest&, const std::string& dir)>& body) {
  std::unique_ptr<RunManifest> manifest;
  auto fail = [&](int code, const std::string& what) {
    std::cerr << "rydchip " << command << ": error: " << what << '\n';
    if (manifest) {
      try {
        manifest->write_failed(code, what);
      } catch (const std::exception&) {
      }
    }
    return code;
  };
  try {
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) throw Error(ErrorKind::Domain, "cannot create output directory '" + opt.out + "': " + ec.message());
    manifest = std::make_unique<RunManifest>((fs::path(opt.out) / "manifest.json").string(), command);
    manifest->write_incomplete();
    const int code = body(*manifest, opt.out);
    if (code == exit_code::kOk) manifest->write_complete();
    return code;
  } catch (const Error& e) {
    return fail(exit_code_for(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(exit_code::kInternal, e.what());
  }
}

std::string output_path(RunManifest& m, const std::string& dir, const char* name) {
  const std::string path = (fs::path(dir) / name).string();
  m.add_output(path);
  return path;
}

void note_unused(RunManifest& m, const Config& cfg) {
  for (const auto& k : cfg.unused_keys()) m.warn("config key '" + k + "' was not used");
}

}  // namespace

int cmd_field(const RunOptions& opt) {
  return guarded(opt, "field", [&](RunManifest& m, const std::string& dir) {
    Config cfg = Config::load(opt.config);
    FieldConfig field = [&] {
      if (!opt.bias) return read_field_config(cfg);
      // The override makes the bias key optional.
      if (!cfg.has("field.F_bias") && !cfg.has("F_bias")) cfg.set("field.F_bias", "0");
      FieldConfig f = read_field_config(cfg);
      f.F_bias = *opt.bias;
      return f;
    }();
    const FieldModel model = parse_model(opt.model.value_or(cfg.text_if("field.model").value_or("disk")));
    const AxisRange x = read_axis(cfg, "x");
    const AxisRange z = read_axis(cfg, "z");

    m.config() = {{"source", cfg.source()},
                  {"model", model == FieldModel::Disk ? "disk" : "exponential"},
                  {"field", to_json(field)},
                  {"grid", {{"x", {x.lo, x.hi, x.n}}, {"z", {z.lo, z.hi, z.n}}}},
                  {"entries", raw_entries(cfg)}};
    note_unused(m, cfg);
    m.write_incomplete();

    const auto provider = make_field_provider(model, field);
    const FieldGrid grid = field_map_2d(x, z, *provider);

    CsvWriter csv(output_path(m, dir, "field_map.csv"),
                  {"x_um", "z_um", "Fx", "Fz", "Fmag", "gradFmag_x", "gradFmag_z"});
    m.write_incomplete();
    const FieldSample* best = nullptr;
    for (const FieldSample& s : grid.samples) {
      csv.row({s.position.x(), s.position.z(), s.field_vector.x(), s.field_vector.z(), s.magnitude,
               s.gradient_of_magnitude.x(), s.gradient_of_magnitude.z()});
      if (!best || s.magnitude < best->magnitude) best = &s;
    }
    csv.close();
    m.results() = {{"min_Fmag", best->magnitude}, {"min_x_um", best->position.x()}, {"min_z_um", best->position.z()}};
    return exit_code::kOk;
  });
}

int cmd_trap(const RunOptions& opt) {
  return guarded(opt, "trap", [&](RunManifest& m, const std::string& dir) {
    const Config cfg = Config::load(opt.config);
    FieldConfig field = read_field_config(cfg);
    if (opt.bias) field.F_bias = *opt.bias;
    const DressingPair pair = read_pair(cfg, "pair");
    pair.validate();
    const double mass = cfg.number_if("trap.atom_mass").value_or(units::rb87_mass);

    BiasScan scan{field.F_bias, field.F_bias, 1};
    if (opt.scan_bias) {
      scan = parse_scan(*opt.scan_bias);
    } else if (cfg.has("scan.lo") || cfg.has("scan.hi") || cfg.has("scan.n")) {
      scan = {cfg.number("scan.lo"), cfg.number("scan.hi"), static_cast<int>(cfg.integer("scan.n"))};
    }
    const bool colocate = cfg.has("second.d_main") || cfg.has("second.d_aux");
    const bool map = cfg.has("grid.n_x") || cfg.has("grid.n_z");

    json config = {{"source", cfg.source()},
                   {"field", to_json(field)},
                   {"pair", to_json(pair)},
                   {"atom_mass", mass},
                   {"scan", {{"lo", scan.lo}, {"hi", scan.hi}, {"n", scan.n}}}};
    double d_s = 0.0, d_b = 0.0;
    if (colocate) {
      d_s = cfg.number("second.d_main");
      d_b = cfg.number("second.d_aux");
      config["second"] = {{"d_main", d_s}, {"d_aux", d_b}};
    }
    AxisRange gx, gz;
    FieldModel model = FieldModel::Disk;
    if (map) {
      gx = read_axis(cfg, "x");
      gz = read_axis(cfg, "z");
      model = parse_model(opt.model.value_or(cfg.text_if("field.model").value_or("disk")));
      config["map"] = {{"model", model == FieldModel::Disk ? "disk" : "exponential"},
                       {"x", {gx.lo, gx.hi, gx.n}},
                       {"z", {gz.lo, gz.hi, gz.n}}};
    }
    const auto level_r = cfg.number_if("qubit.level_r");
    const auto level_s = cfg.number_if("qubit.level_s");
    const auto dipole_sr = cfg.number_if("qubit.dipole_sr");
    config["entries"] = raw_entries(cfg);
    m.config() = config;
    note_unused(m, cfg);
    m.write_incomplete();

    const auto rows = trap_scan_vs_bias(pair, field, scan.lo, scan.hi, scan.n, mass);
    CsvWriter csv(output_path(m, dir, "trap_scan.csv"), {"F_bias_Vcm", "z_min_um", "z_cross_um", "k_N_per_m",
                                                         "nu_rad_s", "nu_Hz", "sigma_nm", "status"});
    m.write_incomplete();
    int valid = 0;
    const double nan = std::nan("");
    for (const TrapScanRow& r : rows) {
      if (r.trap) {
        const TrapParams& t = *r.trap;
        ++valid;
        csv.row({r.F_bias, t.z_min, t.z_cross, t.force_constant, t.vib_freq, t.vib_freq_hz(), t.width,
                 std::string("ok")});
        FieldConfig at = field;
        at.F_bias = r.F_bias;
        try {
          const StarkLinearity lin = stark_linearity_check(t, at);
          if (lin.warn) {
            m.warn("field variation across the trap is " + format_number(lin.ratio) + " of F at F_bias=" +
                   format_number(r.F_bias) + " (constant-dipole bound 0.05)");
          }
        } catch (const Error& e) {
          m.warn("linearity check at F_bias=" + format_number(r.F_bias) + ": " + e.what());
        }
      } else {
        csv.row({r.F_bias, nan, nan, nan, nan, nan, nan, r.failure});
      }
    }
    csv.close();
    m.results()["valid_rows"] = valid;
    if (valid == 0) throw Error(ErrorKind::NoTrap, "no bias value in the scan yields a trap");

    if (colocate) {
      const Colocation c = colocate_second_trap(pair, d_s, d_b, field, mass);
      DressingPair uncorrected = c.second;
      uncorrected.detuning = c.detuning_uncorrected;
      const ExponentialField provider(field);
      const TrapParams plain = numerical_trap(uncorrected, provider, mass);
      const double f_plain = franck_condon(c.primary, plain);

      CsvWriter co(output_path(m, dir, "colocation.csv"),
                   {"detuning_prime_GHz", "rabi_prime_MHz", "z_min_um", "z_min_prime_um", "nu_rad_s",
                    "nu_prime_rad_s", "nu_ratio", "franck_condon", "detuning_uncorrected_GHz",
                    "offset_uncorrected_um", "franck_condon_uncorrected"});
      m.write_incomplete();
      co.row({c.second.detuning, c.second.rabi, c.primary.z_min, c.secondary.z_min, c.primary.vib_freq,
              c.secondary.vib_freq, c.secondary.vib_freq / c.primary.vib_freq, c.franck_condon,
              c.detuning_uncorrected, c.offset_uncorrected, f_plain});
      co.close();
      m.results()["colocation"] = {{"second", to_json(c.second)},
                                   {"primary", to_json(c.primary)},
                                   {"secondary", to_json(c.secondary)},
                                   {"franck_condon", c.franck_condon},
                                   {"franck_condon_uncorrected", f_plain}};
      if (level_r && level_s && dipole_sr) {
        const QubitParams q =
            qubit_params(c.primary, c.secondary, pair, c.second, *level_r, *level_s, *dipole_sr, field);
        m.results()["qubit"] = {{"omega0_GHz", q.omega0},           {"omega1_GHz", q.omega1},
                                {"omega10_GHz", q.omega10},         {"franck_condon", q.franck_condon},
                                {"dipole_sr", q.dipole_sr},         {"dipole_01", q.dipole_01}};
      }
    }

    if (map) {
      const auto provider = make_field_provider(model, field);
      const PotentialMap pm = potential_map_2d(pair, *provider, gx, gz);
      CsvWriter pc(output_path(m, dir, "potential_map.csv"), {"x_um", "z_um", "Eplus_hMHz"});
      m.write_incomplete();
      for (int iz = 0; iz < gz.n; ++iz) {
        for (int ix = 0; ix < gx.n; ++ix) pc.row({gx.at(ix), gz.at(iz), pm.at(ix, iz)});
      }
      pc.close();
    }
    return exit_code::kOk;
  });
}

namespace {

struct GateSetup {
  CavityGateConfig cfg;
  double t_tr = 0.0;
  double p01_peak = 0.0;
  bool optimized = false;
};

// Fixes delta_c (optimised when auto) and the analytic transfer time.
GateSetup resolve_gate(const CavityGateConfig& base, bool auto_detuning) {
  GateSetup s;
  s.cfg = base;
  s.cfg.validate();
  if (auto_detuning) {
    const DetuningOptimum opt = optimize_detuning(s.cfg);
    s.cfg.delta_c = opt.delta_c_over_g * s.cfg.g;
    s.optimized = true;
  }
  const TransferPeak peak = transfer_peak(s.cfg);
  s.t_tr = peak.t;
  s.p01_peak = peak.p01;
  return s;
}

void regime_warnings(RunManifest& m, const CavityGateConfig& cfg) {
  const int n_max = cfg.cutoff();
  if (!exchange_regime_ok(cfg.g, cfg.delta_c, n_max)) {
    m.warn("|delta_c| = " + format_number(std::abs(cfg.detuning_over_g())) + " g is below 5 g sqrt(n_max+1) at n_max=" +
           std::to_string(n_max) + "; the second-order exchange rate is only indicative");
  }
  const double mass = photon_distribution(cfg.n_th, n_max).truncation_mass;
  if (mass > 0.0) {
    m.warn("thermal distribution truncated at n_max=" + std::to_string(n_max) + " (mass " + format_number(mass) +
           " dropped)");
  }
}

int gate_dynamics(const RunOptions& opt, RunManifest& m, const std::string& dir) {
  const Config cfg = Config::load(opt.config);
  const bool auto_detuning = gate_detuning_is_auto(cfg);
  const CavityGateConfig base = read_gate_config(cfg);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const int M = resolve_trajectories(opt, cfg);
  const int samples = static_cast<int>(cfg.integer_if("gate.samples").value_or(101));
  const double span = cfg.number_if("gate.t_end_over_ttr").value_or(2.0);
  const bool start_01 = cfg.text_if("gate.start").value_or("10") == "01";
  if (samples < 2) throw Error(ErrorKind::Config, "gate.samples must be >= 2");
  if (!(span > 0.0)) throw Error(ErrorKind::Config, "gate.t_end_over_ttr must be > 0");

  m.set_seed(seed);
  m.config() = {{"source", cfg.source()},
                {"gate", to_json(base)},
                {"delta_c", auto_detuning ? json("auto") : json(base.delta_c)},
                {"trajectories", M},
                {"samples", samples},
                {"t_end_over_ttr", span},
                {"start", start_01 ? "01" : "10"},
                {"oracle", opt.oracle},
                {"entries", raw_entries(cfg)}};
  note_unused(m, cfg);
  m.write_incomplete();

  const GateSetup g = resolve_gate(base, auto_detuning);
  m.config()["gate"] = to_json(g.cfg);
  regime_warnings(m, g.cfg);
  const double t_end = span * g.t_tr;
  std::vector<double> times(static_cast<size_t>(samples));
  for (int i = 0; i < samples; ++i) times[i] = t_end * i / (samples - 1);
  times.back() = t_end;

  TrajectoryOptions topt;
  topt.start_in_01 = start_01;
  const TrajectoryEnsembleResult ens = simulate_ensemble(g.cfg, M, seed, t_end, times, topt);
  std::optional<OracleResult> oracle;
  if (opt.oracle) {
    OracleOptions oo;
    oo.start_in_01 = start_01;
    oracle = master_equation_oracle(g.cfg, times, oo);
  }
  const AnalyticTransfer analytic(g.cfg);

  std::vector<std::string> header = {"t_over_g", "p00",    "p01",    "p10",      "p11",         "p_tot",
                                     "se_p01",   "se_p00", "se_p10", "se_p11",   "se_p_tot",    "fidelity",
                                     "se_fidelity", "p01_analytic"};
  if (oracle) {
    for (const char* c : {"oracle_p00", "oracle_p01", "oracle_p10", "oracle_p11", "oracle_p_tot", "oracle_trace"}) {
      header.emplace_back(c);
    }
  }
  CsvWriter csv(output_path(m, dir, "dynamics.csv"), header);
  m.write_incomplete();
  for (size_t k = 0; k < times.size(); ++k) {
    // The analytic curve follows |10> -> |01>; for the |01> start it is p10.
    std::vector<CsvCell> row = {times[k],
                                ens.p[0][k].mean,
                                ens.p[1][k].mean,
                                ens.p[2][k].mean,
                                ens.p[3][k].mean,
                                ens.p_tot[k].mean,
                                ens.p[1][k].stderr_,
                                ens.p[0][k].stderr_,
                                ens.p[2][k].stderr_,
                                ens.p[3][k].stderr_,
                                ens.p_tot[k].stderr_,
                                ens.fidelity[k].mean,
                                ens.fidelity[k].stderr_,
                                analytic.p01(times[k])};
    if (oracle) {
      const auto& p = oracle->populations[k];
      for (double v : p) row.emplace_back(v);
      row.emplace_back(oracle->p_tot[k]);
      row.emplace_back(oracle->trace[k]);
    }
    csv.row(row);
  }
  csv.close();

  m.results() = {{"delta_c_over_g", g.cfg.detuning_over_g()},
                 {"delta_c_optimized", g.optimized},
                 {"t_tr_g", g.t_tr},
                 {"t_tr_us", g.t_tr / (units::two_pi * g.cfg.g)},
                 {"p01_analytic_peak", g.p01_peak},
                 {"n_max", ens.n_max},
                 {"truncation_mass", ens.truncation_mass},
                 {"cavity_jumps", {{"mean", ens.cavity_jumps.mean}, {"stderr", ens.cavity_jumps.stderr_}}},
                 {"atomic_losses", {{"mean", ens.atomic_losses.mean}, {"stderr", ens.atomic_losses.stderr_}}}};
  return exit_code::kOk;
}

CavityGateConfig with_occupation(const CavityGateConfig& base, double n_th, bool explicit_cutoff) {
  CavityGateConfig c = base;
  c.n_th = n_th;
  if (!explicit_cutoff) c.n_max.reset();
  return c;
}

int gate_detuning_sweep(const RunOptions& opt, RunManifest& m, const std::string& dir) {
  const Config cfg = Config::load(opt.config);
  const CavityGateConfig base = read_gate_config(cfg);
  const std::vector<double> nth = resolve_nth_list(opt, cfg);
  m.config() = {{"source", cfg.source()}, {"gate", to_json(base)}, {"nth_list", nth}, {"entries", raw_entries(cfg)}};
  note_unused(m, cfg);
  m.write_incomplete();

  CsvWriter csv(output_path(m, dir, "detuning_sweep.csv"), {"n_th", "delta_c_opt_over_g", "t_tr_g", "p01_max"});
  m.write_incomplete();
  json rows = json::array();
  for (double n : nth) {
    const CavityGateConfig c = with_occupation(base, n, base.n_max.has_value());
    const DetuningOptimum o = optimize_detuning(c);
    csv.row({n, o.delta_c_over_g, o.t_tr, o.p01_max});
    rows.push_back({{"n_th", n}, {"n_max", o.n_max}, {"truncation_mass", o.truncation_mass}});
  }
  csv.close();
  m.results()["rows"] = rows;
  return exit_code::kOk;
}

int gate_fidelity_sweep(const RunOptions& opt, RunManifest& m, const std::string& dir) {
  const Config cfg = Config::load(opt.config);
  const CavityGateConfig base = read_gate_config(cfg);
  const bool auto_detuning = gate_detuning_is_auto(cfg);
  const std::vector<double> nth = resolve_nth_list(opt, cfg);
  const std::uint64_t seed = resolve_seed(opt, cfg);
  const int M = resolve_trajectories(opt, cfg);
  m.set_seed(seed);
  m.config() = {{"source", cfg.source()},
                {"gate", to_json(base)},
                {"delta_c", auto_detuning ? json("auto") : json(base.delta_c)},
                {"nth_list", nth},
                {"trajectories", M},
                {"entries", raw_entries(cfg)}};
  note_unused(m, cfg);
  m.write_incomplete();

  CsvWriter csv(output_path(m, dir, "fidelity_sweep.csv"), {"n_th", "fidelity", "stderr", "M", "seed"});
  m.write_incomplete();
  json rows = json::array();
  for (double n : nth) {
    const GateSetup g = resolve_gate(with_occupation(base, n, base.n_max.has_value()), auto_detuning);
    const MeanWithError f = bell_fidelity_at(g.cfg, M, seed, 0.5 * g.t_tr);
    csv.row({n, f.mean, f.stderr_, static_cast<long long>(M), seed});
    rows.push_back({{"n_th", n},
                    {"delta_c_over_g", g.cfg.detuning_over_g()},
                    {"t_tr_g", g.t_tr},
                    {"n_max", g.cfg.cutoff()}});
  }
  csv.close();
  m.results()["rows"] = rows;
  return exit_code::kOk;
}

}  // namespace

int cmd_gate(const std::string& sub, const RunOptions& opt) {
  const std::string command = "gate " + sub;
  return guarded(opt, command, [&](RunManifest& m, const std::string& dir) {
    if (sub == "dynamics") return gate_dynamics(opt, m, dir);
    if (sub == "detuning-sweep") return gate_detuning_sweep(opt, m, dir);
    if (sub == "fidelity-sweep") return gate_fidelity_sweep(opt, m, dir);
    throw Error(ErrorKind::Config, "unknown gate subcommand '" + sub + "'");
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Dressed Rydberg traps near an atom chip and cavity-mediated two-qubit gates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RYDCHIP_VERSION);

  RunOptions opt;
  std::string model;
  std::string scan;
  std::string nth;
  std::uint64_t seed = 0;
  int trajectories = 0;
  double bias = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "Config file or bundled preset name")->required();
    cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
  };
  auto add_field_flags = [&](CLI::App* cmd) {
    cmd->add_option("--model", model, "Field model")->check(CLI::IsMember({"disk", "exponential"}));
    cmd->add_option("--bias", bias, "Bias field F_bias, V/cm (overrides the config)");
  };

  CLI::App* field = app.add_subcommand("field", "Field map of the adsorbate disk plus bias");
  add_common(field);
  add_field_flags(field);

  CLI::App* trap = app.add_subcommand("trap", "Trap scan against the bias field, colocation, potential map");
  add_common(trap);
  add_field_flags(trap);
  trap->add_option("--scan-bias", scan, "Bias scan lo:hi:n, V/cm");

  CLI::App* gate = app.add_subcommand("gate", "Cavity-mediated exchange gate");
  gate->require_subcommand(1);
  std::string gate_sub;
  for (const char* name : {"dynamics", "detuning-sweep", "fidelity-sweep"}) {
    CLI::App* sub = gate->add_subcommand(name);
    add_common(sub);
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--trajectories", trajectories, "Number of trajectories M")->check(CLI::PositiveNumber);
    if (std::string(name) == "dynamics") {
      sub->add_flag("--oracle", opt.oracle, "Append master-equation columns (n_max <= 12)");
    } else {
      sub->add_option("--nth-list", nth, "Thermal occupations a,b,c");
    }
    sub->callback([&gate_sub, name] { gate_sub = name; });
  }

  CLI::App* presets = app.add_subcommand("presets", "List bundled presets, or print one");
  std::string preset_name;
  presets->add_option("name", preset_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kConfig;
  }

  auto set_if = [](CLI::App* cmd, const char* flag, auto& target, const auto& value) {
    if (cmd->count(flag) > 0) target = value;
  };
  for (CLI::App* cmd : app.get_subcommands()) {
    CLI::App* leaf = cmd == gate ? gate->get_subcommands().front() : cmd;
    if (leaf->get_option_no_throw("--model")) set_if(leaf, "--model", opt.model, model);
    if (leaf->get_option_no_throw("--bias")) set_if(leaf, "--bias", opt.bias, bias);
    if (leaf->get_option_no_throw("--scan-bias")) set_if(leaf, "--scan-bias", opt.scan_bias, scan);
    if (leaf->get_option_no_throw("--nth-list")) set_if(leaf, "--nth-list", opt.nth_list, nth);
    if (leaf->get_option_no_throw("--seed")) set_if(leaf, "--seed", opt.seed, seed);
    if (leaf->get_option_no_throw("--trajectories")) set_if(leaf, "--trajectories", opt.trajectories, trajectories);
  }

  if (presets->parsed()) {
    if (preset_name.empty()) {
      for (auto name : preset_names()) std::cout << name << '\n';
      return exit_code::kOk;
    }
    const auto text = find_preset(preset_name);
    if (!text) {
      std::cerr << "rydchip presets: error: no preset named '" << preset_name << "'\n";
      return exit_code::kConfig;
    }
    std::cout << *text;
    return exit_code::kOk;
  }
  if (field->parsed()) return cmd_field(opt);
  if (trap->parsed()) return cmd_trap(opt);
  return cmd_gate(gate_sub, opt);
}

}  // namespace rydchip::cli
