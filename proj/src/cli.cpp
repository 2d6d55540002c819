#include "hwec/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "hwec/analysis.hpp"
#include "hwec/config.hpp"
#include "hwec/errors.hpp"
#include "hwec/io.hpp"
#include "hwec/optimizer.hpp"

#ifndef HWEC_VERSION
#define HWEC_VERSION "0.0.0"
#endif

namespace hwec::cli {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json triple(const std::array<double, 3>& v) { return Json::array({v[0], v[1], v[2]}); }

// Collects the files of one run and writes the manifest last.
class Output {
 public:
  Output(fs::path dir, RunManifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  void write(const std::string& name, std::string_view content) {
    io::write_file(dir_ / name, content);
    manifest_.files.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }
  void finish() {
    manifest_.files.push_back("manifest.json");
    std::sort(manifest_.files.begin(), manifest_.files.end());
    io::write_file(dir_ / "manifest.json", manifest_json(manifest_));
  }
  [[nodiscard]] const fs::path& dir() const { return dir_; }
  [[nodiscard]] std::size_t count() const { return manifest_.files.size(); }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

struct Loaded {
  MachineConfig machine;
  std::string path;
  std::string hash;
};

Loaded load(const std::string& path) {
  if (path.empty()) {
    Loaded l{build_reference_design(), "", ""};
    l.hash = io::fnv1a_hex(to_toml(l.machine));
    return l;
  }
  Loaded l{load_config(path), path, ""};
  l.hash = io::fnv1a_hex(io::read_file(path));
  return l;
}

Output open_output(const std::string& out_flag, const std::string& command, const Loaded& cfg) {
  RunManifest m;
  m.command = command;
  m.config_path = cfg.path;
  m.config_hash = cfg.hash;
  m.tool_version = HWEC_VERSION;
  m.timestamp = utc_timestamp();
  const fs::path dir = output_directory(out_flag, command);
  m.output_dir = dir.string();
  return Output(dir, std::move(m));
}

Json turn_json(const TurnLoop& t) {
  return Json{{"pack", t.pack}, {"pancake", t.pancake}, {"layer", t.layer}, {"turn", t.turn},
              {"r_m", t.radius_m}, {"z_m", t.z_m}};
}

Json metrics_json(const Metrics& x) {
  return Json{{"window_begin_s", x.window_begin_s},
              {"window_end_s", x.window_end_s},
              {"power_kW", x.power_out_W * 1e-3},
              {"power_out_W", x.power_out_W},
              {"source_power_W", x.source_power_W},
              {"vrms_in_V", triple(x.vrms_in_V)},
              {"vrms_out_V", x.vrms_out_V},
              {"irms_A", triple(x.irms_A)},
              {"peak_emf_V", triple(x.peak_emf_V)},
              {"peak_phase_current_A", x.peak_phase_current_A},
              {"joule_loss_W", x.joule_loss_W},
              {"armature_loss_W", x.armature_loss_W},
              {"diode_loss_W", x.diode_loss_W},
              {"efficiency_percent", x.efficiency_percent},
              {"power_factor", x.power_factor},
              {"thd_in", triple(x.thd_in)},
              {"thd_out", x.thd_out},
              {"fundamental_in_Hz", x.fundamental_in_Hz},
              {"fundamental_out_Hz", x.fundamental_out_Hz},
              {"energy_residual", x.energy_residual}};
}

Json density_json(const CurrentDensityCheck& c) {
  return Json{{"exceedance_fraction", triple(c.exceedance_fraction)},
              {"peak_current_A", triple(c.peak_current_A)},
              {"peak_density_A_per_mm2", c.peak_density_A_per_mm2},
              {"within_duty", c.within_duty},
              {"within_current_limit", c.within_current_limit}};
}

Json cryo_json(const CryoReport& r) {
  const double rel = (r.coolant_mass_kg - r.comparison_coolant_mass_kg) / r.comparison_coolant_mass_kg;
  return Json{{"magnet_mass_kg", r.magnet_mass_kg},
              {"coolant_mass_kg", r.coolant_mass_kg},
              {"copper_enthalpy_difference_J_per_kg", r.enthalpy_difference_J_per_kg},
              {"operating_temperature_K", r.operating_temperature_K},
              {"current_sharing_temperature_K", r.current_sharing_temperature_K},
              {"critical_temperature_K", r.critical_temperature_K},
              {"stability_margin_J_per_m3", r.stability_margin_J_per_m3},
              {"comparison",
               {{"coolant_mass_kg", r.comparison_coolant_mass_kg},
                {"magnet_mass_for_comparison_kg", r.comparison_magnet_mass_kg},
                {"relative_difference", rel}}}};
}

Json stress_json(const StressMap& s, double current_A) {
  return Json{{"model", to_string(s.model)},
              {"current_A", current_A},
              {"youngs_modulus_Pa", s.youngs_modulus_Pa},
              {"max_hoop_MPa", s.max_hoop_Pa * 1e-6},
              {"mean_hoop_MPa", s.mean_hoop_Pa * 1e-6},
              {"max_abs_radial_MPa", s.max_abs_radial_Pa * 1e-6},
              {"turns", s.turns.size()}};
}

std::string csv_of(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

// ---- commands ---------------------------------------------------------------

struct SimulateArgs {
  std::string config, out, form;
  std::optional<int> cycles;
  std::optional<double> amplitude, current;
  bool svg = false;
};

void cmd_simulate(const SimulateArgs& a, std::optional<Output>& out) {
  Loaded cfg = load(a.config);
  MachineConfig& m = cfg.machine;
  if (a.cycles) m.numerics.analysis_cycles = *a.cycles;
  if (a.amplitude) m.wave.amplitude_m = *a.amplitude;
  if (a.current) m.operating_current_A = *a.current;
  if (!a.form.empty()) m.wave.form = wave_form_from_string(a.form);
  m.validate();

  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto ll = magnet_critical_current(field, m.lift, m.operating_temperature_K,
                                          m.operating_current_A, m.numerics.load_line);
  const GeneratorModel model(m);
  CaseSpec spec = case_for(m, m.wave.amplitude_m, m.operating_current_A);
  spec.critical_current_A = ll.critical_current_A;
  const CaseResult r = run_case(m, model, spec);

  out.emplace(open_output(a.out, "simulate", cfg));
  out->write("transient.csv", csv_of([&](std::ostream& os) { write_transient_csv(os, r.transient); }));
  out->write("waveform.csv",
             csv_of([&](std::ostream& os) { write_waveform_csv(os, spec.wave, r.transient.t_s); }));
  Json j;
  j["case"] = {{"form", to_string(spec.wave.form)},
               {"amplitude_m", spec.wave.amplitude_m},
               {"frequency_Hz", spec.wave.frequency_Hz},
               {"current_A", spec.current_A}};
  j["dt_s"] = r.dt_s;
  j["critical_current_A"] = ll.critical_current_A;
  j["armature_resistance_ohm"] = r.transient.armature_resistance_ohm;
  j["switching_events"] = r.transient.switching_events;
  j["metrics"] = metrics_json(r.metrics);
  j["current_density"] = density_json(armature_check(m, r.transient));
  out->write_json("metrics.json", j);
  if (a.svg) {
    const auto& ts = r.transient;
    out->write("emf.svg", io::svg_plot("Phase EMF", "t [s]", "e [V]", ts.t_s,
                                       {{"e1", ts.emf_V[0]}, {"e2", ts.emf_V[1]}, {"e3", ts.emf_V[2]}}));
    out->write("current.svg",
               io::svg_plot("Armature current", "t [s]", "i [A]", ts.t_s,
                            {{"i1", ts.current_A[0]}, {"i2", ts.current_A[1]}, {"i3", ts.current_A[2]}}));
    out->write("vout.svg", io::svg_plot("Output voltage", "t [s]", "v [V]", ts.t_s, {{"vout", ts.vout_V}}));
  }
}

void cmd_loadline(const std::string& config, const std::string& out_flag, int points,
                  std::ostream& err, std::optional<Output>& out) {
  Loaded cfg = load(config);
  const MachineConfig& m = cfg.machine;
  if (points < 2) throw ValidationError("loadline: --points must be >= 2");
  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const LoadLineStudy s = load_line_study(m, field, points);
  const FieldSummary f = field_summary(m, field);

  out.emplace(open_output(out_flag, "loadline", cfg));
  out->write("loadline.csv", csv_of([&](std::ostream& os) {
               os << "current_A,min_turn_ic_A\n";
               for (const auto& p : s.curve) os << io::fmt(p.current_A) << ',' << io::fmt(p.min_ic_A) << '\n';
             }));
  out->write("ic_temperature.csv", csv_of([&](std::ostream& os) {
               os << "T_K,ic_A\n";
               for (const auto& p : s.ic_temperature) os << io::fmt(p.T_K) << ',' << io::fmt(p.ic_A) << '\n';
             }));
  const FieldMap map = field.at_current(m.operating_current_A);
  out->write("winding_field.csv", csv_of([&](std::ostream& os) {
               os << "pack,pancake,layer,turn,r_m,z_m,Br_T,Bz_T,B_T\n";
               const auto turns = field.turns();
               for (std::size_t i = 0; i < turns.size(); ++i) {
                 const auto& t = turns[i];
                 const auto& b = map.samples[i].field;
                 os << t.pack << ',' << t.pancake << ',' << t.layer << ',' << t.turn << ','
                    << io::fmt(t.radius_m) << ',' << io::fmt(t.z_m) << ',' << io::fmt(b.br_T) << ','
                    << io::fmt(b.bz_T) << ',' << io::fmt(b.magnitude()) << '\n';
               }
             }));
  const auto& r = s.result;
  Json j{{"critical_current_A", r.critical_current_A},
         {"operating_current_A", r.operating_current_A},
         {"margin_A", r.margin_A},
         {"margin_percent", r.margin_percent},
         {"negative_margin", s.negative_margin},
         {"iterations", r.iterations},
         {"limiting_turn", turn_json(r.limiting_turn)},
         {"current_sharing_temperature_K",
          s.negative_margin ? Json(nullptr) : Json(s.current_sharing_temperature_K)},
         {"field",
          {{"centre_T", f.centre_T}, {"max_T", f.max_T}, {"mean_T", f.mean_T}}}};
  out->write_json("loadline.json", j);
  if (s.negative_margin) {
    err << Json{{"level", "warning"}, {"command", "loadline"},
                {"message", "operating current is at or above the magnet critical current"},
                {"margin_A", r.margin_A}}
               .dump()
        << '\n';
  }
}

void cmd_sweep(const std::string& config, const std::string& spec_path, const std::string& out_flag,
               int jobs, std::optional<Output>& out, bool& no_feasible) {
  Loaded cfg = load(config);
  if (jobs < 1) throw ValidationError("sweep: --jobs must be >= 1");
  const SweepSpec spec = load_sweep_spec(spec_path);
  const SweepReport rep = sweep(spec, cfg.machine, jobs);

  cfg.hash = io::fnv1a_hex(io::read_file(spec_path) + cfg.hash);
  out.emplace(open_output(out_flag, "sweep", cfg));
  out->write("sweep.csv", csv_of([&](std::ostream& os) { write_sweep_csv(os, rep); }));
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"height_mm", r.height_mm},
                    {"width_mm", r.width_mm},
                    {"built_height_mm", r.built_height_mm},
                    {"built_width_mm", r.built_width_mm},
                    {"feasible", r.feasible},
                    {"reason", r.reason},
                    {"critical_current_A", r.critical_current_A},
                    {"margin_A", r.margin_A},
                    {"max_field_T", r.max_field_T},
                    {"max_hoop_MPa", r.max_hoop_MPa},
                    {"emf_rms_V", r.emf_rms_V},
                    {"power_out_W", r.power_out_W ? Json(*r.power_out_W) : Json(nullptr)},
                    {"tape_length_error", r.tape_length_error}});
  }
  auto index = [](const std::optional<std::size_t>& i) { return i ? Json(*i) : Json(nullptr); };
  Json lengths = Json::object();
  for (const auto& [name, len] : rep.tape_length_m) lengths[name] = len;
  Json j{{"objective", to_string(rep.objective)},
         {"tape_length_m", lengths},
         {"argmax", index(rep.argmax())},
         {"argmax_emf", index(rep.argmax_emf)},
         {"argmax_power", index(rep.argmax_power)},
         {"ranking", rep.ranking},
         {"rows", rows}};
  out->write_json("sweep.json", j);
  no_feasible = !rep.argmax().has_value();
}

void cmd_cryo(const std::string& config, const std::string& out_flag, std::optional<Output>& out) {
  Loaded cfg = load(config);
  const MachineConfig& m = cfg.machine;
  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto ll = magnet_critical_current(field, m.lift, m.operating_temperature_K,
                                          m.operating_current_A, m.numerics.load_line);
  const CryoReport rep = cryo_report(m, ll.critical_current_A);
  const GeneratorModel model(m);
  CaseSpec spec = case_for(m, m.wave.amplitude_m, m.operating_current_A);
  spec.critical_current_A = ll.critical_current_A;
  const CaseResult run = run_case(m, model, spec);

  out.emplace(open_output(out_flag, "cryo", cfg));
  Json j = cryo_json(rep);
  j["critical_current_A"] = ll.critical_current_A;
  j["armature_current_density"] = density_json(armature_check(m, run.transient));
  j["armature_current_density"]["limit_A_per_mm2"] = m.cryo.current_density_limit_A_per_mm2;
  j["armature_current_density"]["conductor_area_mm2"] = m.armature.conductor_area_m2 * 1e6;
  out->write_json("cryo.json", j);
}

void cmd_stress(const std::string& config, const std::string& out_flag,
                std::optional<double> current, const std::string& model_name,
                std::optional<Output>& out) {
  Loaded cfg = load(config);
  MachineConfig& m = cfg.machine;
  if (!model_name.empty()) m.mechanics.model = stress_model_from_string(model_name);
  const double I = current.value_or(m.operating_current_A);
  if (!(I >= 0.0)) throw ValidationError("stress: --current must be >= 0");
  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const StressMap s = hoop_stress_map(field, I, m.mechanics);
  out.emplace(open_output(out_flag, "stress", cfg));
  out->write("stress.csv", csv_of([&](std::ostream& os) { write_stress_csv(os, s); }));
  out->write_json("stress.json", stress_json(s, I));
}

void cmd_report(const std::string& config, const std::string& out_flag, std::optional<Output>& out) {
  Loaded cfg = load(config);
  const MachineConfig& m = cfg.machine;
  const WindingField field(m.assembly, m.iron_boost_factor, m.numerics.field);
  const FieldSummary f = field_summary(m, field);
  const LoadLineStudy ll = load_line_study(m, field);
  const double ic = ll.result.critical_current_A;
  const StressMap stress = hoop_stress_map(field, m.operating_current_A, m.mechanics);
  const CryoReport cryo = cryo_report(m, ic);

  const GeneratorModel model(m);
  Json cases = Json::array();
  const double amplitudes[] = {m.wave.amplitude_m, 1.4 * m.wave.amplitude_m};
  const double currents[] = {m.operating_current_A, ic};
  std::optional<CaseResult> base;
  for (double amp : amplitudes) {
    for (double cur : currents) {
      CaseSpec spec = case_for(m, amp, std::min(cur, ic));
      spec.critical_current_A = ic;
      CaseResult r = run_case(m, model, spec);
      cases.push_back({{"amplitude_m", amp}, {"current_A", spec.current_A},
                       {"metrics", metrics_json(r.metrics)}});
      if (!base) base = std::move(r);
    }
  }
  MachineConfig tri = m;
  tri.wave.form = WaveForm::triangular;
  CaseSpec tspec = case_for(tri, m.wave.amplitude_m, m.operating_current_A);
  tspec.critical_current_A = ic;
  const CaseResult t = run_case(tri, model, tspec);
  const double p_sin = base->metrics.power_out_W, p_tri = t.metrics.power_out_W;

  Json widths = nullptr;
  bool multi = false;
  for (const auto& dp : m.assembly.packs.front().pack.pancakes) {
    multi = multi || dp.tape.name != m.assembly.packs.front().pack.pancakes.front().tape.name;
  }
  if (multi) {
    const WidthComparison c = compare_multi_width(build_single_width_variant(m), m);
    widths = {{"single_width_critical_current_A", c.single_ic_A},
              {"multi_width_critical_current_A", c.multi_ic_A},
              {"delta_critical_current_percent", c.delta_ic_percent},
              {"single_width_current_A", c.single_current_A},
              {"single_width_power_W", c.single_power_W},
              {"multi_width_power_W", c.multi_power_W},
              {"delta_power_percent", c.delta_power_percent}};
  }

  out.emplace(open_output(out_flag, "report", cfg));
  Json design{{"maximum_magnetic_flux_density_T", f.max_T},
              {"average_magnetic_flux_density_T", f.mean_T},
              {"magnet_centre_flux_density_T", f.centre_T},
              {"critical_current_A", ic},
              {"current_margin_A", ll.result.margin_A},
              {"maximum_stress_MPa", stress.max_hoop_Pa * 1e-6},
              {"average_stress_MPa", stress.mean_hoop_Pa * 1e-6},
              {"youngs_modulus_GPa", m.mechanics.youngs_modulus_Pa * 1e-9},
              {"coolant_mass_kg", cryo.coolant_mass_kg},
              {"current_sharing_temperature_K", cryo.current_sharing_temperature_K},
              {"stability_margin_GJ_per_m3", cryo.stability_margin_J_per_m3 * 1e-9}};
  Json j{{"design_parameters", design},
         {"geometry",
          {{"magnet_height_mm", m.assembly.packs.front().pack.total_height_m() * 1e3},
           {"magnet_width_mm", m.assembly.packs.front().pack.total_width_m() * 1e3},
           {"total_tape_length_m", total_tape_length_m(m.assembly)},
           {"magnet_mass_kg", cryo.magnet_mass_kg}}},
         {"cryogenics", cryo_json(cryo)},
         {"operation", cases},
         {"armature_current_density", density_json(armature_check(m, base->transient))},
         {"triangular_wave",
          {{"power_W", p_tri},
           {"sinusoidal_power_W", p_sin},
           {"reduction_percent", 100.0 * (p_sin - p_tri) / p_sin}}},
         {"multi_width", widths}};
  out->write_json("report.json", j);
}

int fail(std::ostream& err, const std::string& command, int code, const char* kind,
         const std::string& message) {
  err << Json{{"level", "error"}, {"command", command}, {"exit_code", code}, {"kind", kind},
              {"message", message}}
             .dump()
      << '\n';
  return code;
}

}  // namespace

std::string manifest_json(const RunManifest& m) {
  Json j{{"command", m.command},
         {"config_path", m.config_path},
         {"config_hash", m.config_hash},
         {"output_dir", m.output_dir},
         {"tool_version", m.tool_version},
         {"timestamp", m.timestamp},
         {"files", m.files}};
  return j.dump(2) + "\n";
}

fs::path output_directory(const std::string& flag, const std::string& command) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("HWEC_OUTPUT_DIR"); env && *env) return env;
  return fs::path("hwec-out") / command;
}

int run(int argc, const char* const* argv, std::ostream& out_stream, std::ostream& err) {
  CLI::App app{"Design and analysis toolkit for a no-insulation HTS tubular wave energy generator",
               "hwec"};
  app.set_version_flag("--version", HWEC_VERSION);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Transient run of generator and rectifier");
  simulate->add_option("--config", sim.config, "Machine config (TOML)")->required();
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--cycles", sim.cycles, "Wave cycles in the analysis window");
  simulate->add_option("--amplitude", sim.amplitude, "Wave amplitude [m]");
  simulate->add_option("--current", sim.current, "Magnet current [A]");
  simulate->add_option("--form", sim.form, "Wave form: sinusoidal or triangular");
  simulate->add_flag("--svg", sim.svg, "Also write SVG plots");

  std::string ll_config, ll_out;
  int ll_points = 101;
  auto* loadline = app.add_subcommand("loadline", "Magnet critical current from the load line");
  loadline->add_option("--config", ll_config, "Machine config (TOML)")->required();
  loadline->add_option("--out", ll_out, "Output directory");
  loadline->add_option("--points", ll_points, "Samples on the load-line curve");

  std::string sw_config, sw_spec, sw_out;
  int sw_jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Fixed-tape-length height and width sweep");
  sweep_cmd->add_option("--config", sw_config, "Template machine config (TOML)")->required();
  sweep_cmd->add_option("--sweep-spec", sw_spec, "Sweep grid (TOML)")->required();
  sweep_cmd->add_option("--out", sw_out, "Output directory");
  sweep_cmd->add_option("--jobs", sw_jobs, "Worker threads");

  std::string cr_config, cr_out;
  auto* cryo = app.add_subcommand("cryo", "Coolant mass, stability margin, armature current density");
  cryo->add_option("--config", cr_config, "Machine config (TOML)")->required();
  cryo->add_option("--out", cr_out, "Output directory");

  std::string st_config, st_out, st_model;
  std::optional<double> st_current;
  auto* stress = app.add_subcommand("stress", "Hoop and radial stress of every turn");
  stress->add_option("--config", st_config, "Machine config (TOML)")->required();
  stress->add_option("--out", st_out, "Output directory");
  stress->add_option("--current", st_current, "Magnet current [A]");
  stress->add_option("--model", st_model, "Stress model: bjr or contact");

  std::string rp_config, rp_out;
  auto* report = app.add_subcommand("report", "Summary of all analyses");
  report->add_option("--config", rp_config, "Machine config (TOML); built-in reference if omitted");
  report->add_option("--out", rp_out, "Output directory");

  std::string command = "hwec";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out_stream, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out_stream, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out_stream, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, command, kValidation, "usage", e.what());
  }
  command = app.get_subcommands().front()->get_name();

  std::optional<Output> out;
  bool no_feasible = false;
  try {
    if (*simulate) {
      cmd_simulate(sim, out);
    } else if (*loadline) {
      cmd_loadline(ll_config, ll_out, ll_points, err, out);
    } else if (*sweep_cmd) {
      cmd_sweep(sw_config, sw_spec, sw_out, sw_jobs, out, no_feasible);
    } else if (*cryo) {
      cmd_cryo(cr_config, cr_out, out);
    } else if (*stress) {
      cmd_stress(st_config, st_out, st_current, st_model, out);
    } else if (*report) {
      cmd_report(rp_config, rp_out, out);
    }
    out->finish();
  } catch (const ValidationError& e) {
    return fail(err, command, kValidation, "validation", e.what());
  } catch (const NegativeMarginError& e) {
    return fail(err, command, kSolver, "negative_margin", e.what());
  } catch (const ConvergenceError& e) {
    return fail(err, command, kSolver, "convergence", e.what());
  } catch (const Error& e) {
    return fail(err, command, kSolver, "analysis", e.what());
  } catch (const std::exception& e) {
    return fail(err, command, kInternal, "internal", e.what());
  }
  if (no_feasible) {
    return fail(err, command, kSolver, "infeasible", "sweep: no feasible candidate in the grid");
  }
  err << Json{{"level", "info"}, {"command", command}, {"output_dir", out->dir().string()},
              {"files", out->count()}}
             .dump()
      << '\n';
  return kOk;
}

}  // namespace hwec::cli
