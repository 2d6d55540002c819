#include "hwec/config.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "hwec/errors.hpp"
#include "hwec/io.hpp"

#include "toml_section.hpp"

namespace hwec {

namespace {

using detail::Section;

LiftModel read_lift(Section s) {
  if (!s.present()) return LiftModel::unity();
  const std::string model = s.string("model", "constant");
  LiftModel lift;
  if (model == "constant") {
    lift = LiftModel::unity();
  } else if (model == "kim") {
    lift = LiftModel::kim_model(s.number("k"), s.number("b0_T"), s.number("beta"));
  } else if (model == "table") {
    auto perp = s.numbers("b_perp_T");
    auto par = s.numbers("b_par_T");
    std::vector<double> flat;
    for (const auto& row : s.matrix("values")) {
      if (row.size() != par.size()) throw ValidationError("config: lift.values rows must match b_par_T");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    lift = LiftModel::tabulated(std::move(perp), std::move(par), std::move(flat));
  } else {
    throw ValidationError("config: lift.model must be constant, kim or table");
  }
  s.finish();
  return lift;
}

}  // namespace

MachineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config: TOML syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ValidationError(os.str());
  }
  Section top(&root, "");
  MachineConfig m;

  Section mach = top.sub("machine");
  m.operating_current_A = mach.number("operating_current_A", m.operating_current_A);
  m.operating_temperature_K = mach.number("operating_temperature_K", m.operating_temperature_K);
  m.iron_boost_factor = mach.number("iron_boost_factor", m.iron_boost_factor);
  m.gap_flux_limit_T = mach.number("gap_flux_limit_T", m.gap_flux_limit_T);
  m.copper_resistivity_ohm_m = mach.number("copper_resistivity_ohm_m", m.copper_resistivity_ohm_m);
  mach.finish();

  std::map<std::string, TapeSpec> tapes;
  for (Section t : top.array_of_tables("tape")) {
    TapeSpec spec;
    spec.name = t.string("name");
    spec.width_m = t.number("width_m");
    spec.thickness_m = t.number("thickness_m");
    spec.ic_ref_A = t.number("ic_ref_A");
    spec.reference_temperature_K = t.number("reference_temperature_K", m.operating_temperature_K);
    spec.critical_temperature_K = t.number("critical_temperature_K", spec.critical_temperature_K);
    t.finish();
    spec.validate();
    if (!tapes.emplace(spec.name, spec).second) {
      throw ValidationError("config: duplicate tape name '" + spec.name + "'");
    }
  }
  if (tapes.empty()) throw ValidationError("config: at least one [[tape]] is required");

  Section mag = top.sub("magnet");
  if (!mag.present()) throw ValidationError("config: missing required table 'magnet'");
  const int count = mag.integer("count");
  const double pitch = mag.number("pole_pitch_m");
  const double cryo_h = mag.number("cryostat_height_m", 0.0);
  const double cryo_w = mag.number("cryostat_width_m", 0.0);
  const double plate = mag.number("plate_thickness_m", 0.5e-3);
  std::vector<DoublePancake> dps;
  for (Section run : mag.array_of_tables("stack")) {
    const std::string name = run.string("tape");
    const auto it = tapes.find(name);
    if (it == tapes.end()) throw ValidationError("config: " + run.path() + " uses unknown tape '" + name + "'");
    DoublePancake dp;
    dp.tape = it->second;
    dp.turns_per_pancake = run.integer("turns_per_pancake");
    dp.inner_radius_m = run.number("inner_radius_m");
    const int repeat = run.integer("repeat", 1);
    run.finish();
    if (repeat < 1) throw ValidationError("config: " + run.path() + ".repeat must be >= 1");
    for (int i = 0; i < repeat; ++i) dps.push_back(dp);
  }
  if (dps.empty()) throw ValidationError("config: magnet.stack needs at least one entry");
  mag.finish();
  if (count < 1) throw ValidationError("config: magnet.count must be >= 1");
  m.assembly = alternating_assembly(stack_pancakes(std::move(dps), plate), count, pitch, cryo_h, cryo_w);

  Section arm = top.sub("armature");
  auto& a = m.armature;
  a.slot_count = arm.integer("slot_count", a.slot_count);
  a.phases = arm.integer("phases", a.phases);
  a.coils_per_phase = arm.integer("coils_per_phase", a.coils_per_phase);
  a.slots_per_pole = arm.integer("slots_per_pole", a.slots_per_pole);
  a.coil_height_m = arm.number("coil_height_m", a.coil_height_m);
  a.coil_radial_width_m = arm.number("coil_radial_width_m", a.coil_radial_width_m);
  a.turns_per_coil = arm.integer("turns_per_coil", a.turns_per_coil);
  a.air_gap_m = arm.number("air_gap_m", a.air_gap_m);
  a.conductor_area_m2 = arm.number("conductor_area_mm2", a.conductor_area_m2 * 1e6) * 1e-6;
  a.actuator_radius_m = arm.number("actuator_radius_m", a.actuator_radius_m);
  a.slot_pitch_m = arm.number("slot_pitch_m", a.slot_pitch_m);
  arm.finish();

  Section wave = top.sub("wave");
  m.wave.form = wave_form_from_string(wave.string("form", to_string(m.wave.form)));
  m.wave.amplitude_m = wave.number("amplitude_m", m.wave.amplitude_m);
  m.wave.frequency_Hz = wave.number("frequency_Hz", m.wave.frequency_Hz);
  m.wave.phase_rad = wave.number("phase_rad", m.wave.phase_rad);
  wave.finish();

  Section cir = top.sub("circuit");
  auto& c = m.circuit;
  c.source_inductance_H = cir.number("source_inductance_H", c.source_inductance_H);
  c.load_resistance_ohm = cir.number("load_resistance_ohm", c.load_resistance_ohm);
  c.smoothing_inductance_H = cir.number("smoothing_inductance_H", c.smoothing_inductance_H);
  c.diode = diode_model_from_string(cir.string("diode_model", to_string(c.diode)));
  c.forward_drop_V = cir.number("forward_drop_V", c.forward_drop_V);
  if (cir.has("armature_resistance_ohm")) c.armature_resistance_ohm = cir.number("armature_resistance_ohm");
  c.smooth_saturation_current_A = cir.number("smooth_saturation_current_A", c.smooth_saturation_current_A);
  c.smooth_emission_voltage_V = cir.number("smooth_emission_voltage_V", c.smooth_emission_voltage_V);
  cir.finish();

  m.lift = read_lift(top.sub("lift"));

  Section cry = top.sub("cryo");
  auto& k = m.cryo;
  k.coolant_latent_heat_J_per_kg = cry.number("coolant_latent_heat_J_per_kg", k.coolant_latent_heat_J_per_kg);
  k.winding_density_kg_per_m3 = cry.number("winding_density_kg_per_m3", k.winding_density_kg_per_m3);
  k.warm_temperature_K = cry.number("warm_temperature_K", k.warm_temperature_K);
  k.data_dir = cry.string("data_dir", k.data_dir);
  if (!k.data_dir.empty() && std::filesystem::path(k.data_dir).is_relative() && !base_dir.empty()) {
    k.data_dir = (base_dir / k.data_dir).lexically_normal().string();
  }
  k.copper_enthalpy_file = cry.string("copper_enthalpy_file", k.copper_enthalpy_file);
  k.winding_heat_capacity_file = cry.string("winding_heat_capacity_file", k.winding_heat_capacity_file);
  k.comparison_coolant_mass_kg = cry.number("comparison_coolant_mass_kg", k.comparison_coolant_mass_kg);
  k.current_density_limit_A_per_mm2 =
      cry.number("current_density_limit_A_per_mm2", k.current_density_limit_A_per_mm2);
  k.exceedance_limit = cry.number("exceedance_limit", k.exceedance_limit);
  k.armature_current_limit_A = cry.number("armature_current_limit_A", k.armature_current_limit_A);
  cry.finish();

  Section mech = top.sub("mechanics");
  m.mechanics.youngs_modulus_Pa = mech.number("youngs_modulus_Pa", m.mechanics.youngs_modulus_Pa);
  m.mechanics.model = stress_model_from_string(mech.string("model", to_string(m.mechanics.model)));
  mech.finish();

  Section num = top.sub("numerics");
  auto& n = m.numerics;
  n.time_step_s = num.number("time_step_s", n.time_step_s);
  n.warmup_cycles = num.integer("warmup_cycles", n.warmup_cycles);
  n.analysis_cycles = num.integer("analysis_cycles", n.analysis_cycles);
  n.load_line.tolerance_A = num.number("load_line_tolerance_A", n.load_line.tolerance_A);
  n.load_line.max_iterations = num.integer("load_line_max_iterations", n.load_line.max_iterations);
  n.field.subfilaments = num.integer("field_subfilaments", n.field.subfilaments);
  n.field.far_field_ratio = num.number("far_field_ratio", n.field.far_field_ratio);
  n.field.far_field_nodes = num.integer("far_field_nodes", n.field.far_field_nodes);
  n.flux.rel_tol = num.number("flux_rel_tol", n.flux.rel_tol);
  n.flux.field.subfilaments = num.integer("flux_subfilaments", n.flux.field.subfilaments);
  n.flux.field.far_field_ratio = n.field.far_field_ratio;
  n.flux.field.far_field_nodes = n.field.far_field_nodes;
  n.profile.fine_step_m = num.number("profile_fine_step_m", n.profile.fine_step_m);
  n.profile.fine_half_span_m = num.number("profile_fine_half_span_m", n.profile.fine_half_span_m);
  n.profile.max_step_m = num.number("profile_max_step_m", n.profile.max_step_m);
  n.profile.growth = num.number("profile_growth", n.profile.growth);
  n.profile.half_span_m = num.number("profile_half_span_m", n.profile.half_span_m);
  num.finish();

  top.finish();
  m.validate();
  return m;
}

MachineConfig load_config(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ValidationError("config file not found: " + path.string());
  }
  return parse_config(io::read_file(path), path.parent_path());
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

// io::fmt may print integral values without a fraction; TOML then reads an
// integer, which the parser accepts for every float key.
std::string num(double v) { return io::fmt(v); }

}  // namespace

std::string to_toml(const MachineConfig& m) {
  std::ostringstream os;
  os << "[machine]\n"
     << "operating_current_A = " << num(m.operating_current_A) << "\n"
     << "operating_temperature_K = " << num(m.operating_temperature_K) << "\n"
     << "iron_boost_factor = " << num(m.iron_boost_factor) << "\n"
     << "gap_flux_limit_T = " << num(m.gap_flux_limit_T) << "\n"
     << "copper_resistivity_ohm_m = " << num(m.copper_resistivity_ohm_m) << "\n";

  const auto& packs = m.assembly.packs;
  if (packs.empty()) throw ValidationError("to_toml: assembly has no packs");
  const WindingPack& pack = packs.front().pack;
  std::vector<TapeSpec> tapes;
  for (const auto& dp : pack.pancakes) {
    if (std::find(tapes.begin(), tapes.end(), dp.tape) == tapes.end()) tapes.push_back(dp.tape);
  }
  for (const auto& t : tapes) {
    os << "\n[[tape]]\n"
       << "name = " << quoted(t.name) << "\n"
       << "width_m = " << num(t.width_m) << "\n"
       << "thickness_m = " << num(t.thickness_m) << "\n"
       << "ic_ref_A = " << num(t.ic_ref_A) << "\n"
       << "reference_temperature_K = " << num(t.reference_temperature_K) << "\n"
       << "critical_temperature_K = " << num(t.critical_temperature_K) << "\n";
  }
  os << "\n[magnet]\n"
     << "count = " << packs.size() << "\n"
     << "pole_pitch_m = " << num(m.assembly.pole_pitch_m) << "\n"
     << "cryostat_height_m = " << num(m.assembly.cryostat_height_m) << "\n"
     << "cryostat_width_m = " << num(m.assembly.cryostat_width_m) << "\n"
     << "plate_thickness_m = " << num(pack.plate_thickness_m) << "\n";
  // Consecutive identical double pancakes collapse into one run.
  for (std::size_t i = 0; i < pack.pancakes.size();) {
    const auto& dp = pack.pancakes[i];
    std::size_t j = i + 1;
    while (j < pack.pancakes.size() && pack.pancakes[j].tape == dp.tape &&
           pack.pancakes[j].turns_per_pancake == dp.turns_per_pancake &&
           pack.pancakes[j].inner_radius_m == dp.inner_radius_m) {
      ++j;
    }
    os << "\n[[magnet.stack]]\n"
       << "tape = " << quoted(dp.tape.name) << "\n"
       << "turns_per_pancake = " << dp.turns_per_pancake << "\n"
       << "inner_radius_m = " << num(dp.inner_radius_m) << "\n"
       << "repeat = " << (j - i) << "\n";
    i = j;
  }

  const auto& a = m.armature;
  os << "\n[armature]\n"
     << "slot_count = " << a.slot_count << "\n"
     << "phases = " << a.phases << "\n"
     << "coils_per_phase = " << a.coils_per_phase << "\n"
     << "slots_per_pole = " << a.slots_per_pole << "\n"
     << "coil_height_m = " << num(a.coil_height_m) << "\n"
     << "coil_radial_width_m = " << num(a.coil_radial_width_m) << "\n"
     << "turns_per_coil = " << a.turns_per_coil << "\n"
     << "air_gap_m = " << num(a.air_gap_m) << "\n"
     << "conductor_area_mm2 = " << num(a.conductor_area_m2 * 1e6) << "\n"
     << "actuator_radius_m = " << num(a.actuator_radius_m) << "\n"
     << "slot_pitch_m = " << num(a.slot_pitch_m) << "\n";

  os << "\n[wave]\n"
     << "form = " << quoted(to_string(m.wave.form)) << "\n"
     << "amplitude_m = " << num(m.wave.amplitude_m) << "\n"
     << "frequency_Hz = " << num(m.wave.frequency_Hz) << "\n"
     << "phase_rad = " << num(m.wave.phase_rad) << "\n";

  const auto& c = m.circuit;
  os << "\n[circuit]\n"
     << "source_inductance_H = " << num(c.source_inductance_H) << "\n"
     << "load_resistance_ohm = " << num(c.load_resistance_ohm) << "\n"
     << "smoothing_inductance_H = " << num(c.smoothing_inductance_H) << "\n"
     << "diode_model = " << quoted(to_string(c.diode)) << "\n"
     << "forward_drop_V = " << num(c.forward_drop_V) << "\n";
  if (c.armature_resistance_ohm) {
    os << "armature_resistance_ohm = " << num(*c.armature_resistance_ohm) << "\n";
  }
  os << "smooth_saturation_current_A = " << num(c.smooth_saturation_current_A) << "\n"
     << "smooth_emission_voltage_V = " << num(c.smooth_emission_voltage_V) << "\n";

  const auto& l = m.lift;
  os << "\n[lift]\n";
  switch (l.kind) {
    case LiftModel::Kind::constant:
      os << "model = \"constant\"\n";
      break;
    case LiftModel::Kind::kim:
      os << "model = \"kim\"\n"
         << "k = " << num(l.k) << "\n"
         << "b0_T = " << num(l.b0_T) << "\n"
         << "beta = " << num(l.beta) << "\n";
      break;
    case LiftModel::Kind::table: {
      auto list = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
        return s + "]";
      };
      os << "model = \"table\"\n"
         << "b_perp_T = " << list(l.b_perp_T) << "\n"
         << "b_par_T = " << list(l.b_par_T) << "\n"
         << "values = [\n";
      const std::size_t nq = l.b_par_T.size();
      for (std::size_t i = 0; i < l.b_perp_T.size(); ++i) {
        os << "  " << list({l.values.begin() + static_cast<long>(i * nq),
                            l.values.begin() + static_cast<long>((i + 1) * nq)})
           << ",\n";
      }
      os << "]\n";
      break;
    }
  }

  const auto& k = m.cryo;
  os << "\n[cryo]\n"
     << "coolant_latent_heat_J_per_kg = " << num(k.coolant_latent_heat_J_per_kg) << "\n"
     << "winding_density_kg_per_m3 = " << num(k.winding_density_kg_per_m3) << "\n"
     << "warm_temperature_K = " << num(k.warm_temperature_K) << "\n";
  if (!k.data_dir.empty()) os << "data_dir = " << quoted(k.data_dir) << "\n";
  os << "copper_enthalpy_file = " << quoted(k.copper_enthalpy_file) << "\n"
     << "winding_heat_capacity_file = " << quoted(k.winding_heat_capacity_file) << "\n"
     << "comparison_coolant_mass_kg = " << num(k.comparison_coolant_mass_kg) << "\n"
     << "current_density_limit_A_per_mm2 = " << num(k.current_density_limit_A_per_mm2) << "\n"
     << "exceedance_limit = " << num(k.exceedance_limit) << "\n"
     << "armature_current_limit_A = " << num(k.armature_current_limit_A) << "\n";

  os << "\n[mechanics]\n"
     << "youngs_modulus_Pa = " << num(m.mechanics.youngs_modulus_Pa) << "\n"
     << "model = " << quoted(to_string(m.mechanics.model)) << "\n";

  const auto& n = m.numerics;
  os << "\n[numerics]\n"
     << "time_step_s = " << num(n.time_step_s) << "\n"
     << "warmup_cycles = " << n.warmup_cycles << "\n"
     << "analysis_cycles = " << n.analysis_cycles << "\n"
     << "load_line_tolerance_A = " << num(n.load_line.tolerance_A) << "\n"
     << "load_line_max_iterations = " << n.load_line.max_iterations << "\n"
     << "field_subfilaments = " << n.field.subfilaments << "\n"
     << "far_field_ratio = " << num(n.field.far_field_ratio) << "\n"
     << "far_field_nodes = " << n.field.far_field_nodes << "\n"
     << "flux_rel_tol = " << num(n.flux.rel_tol) << "\n"
     << "flux_subfilaments = " << n.flux.field.subfilaments << "\n"
     << "profile_fine_step_m = " << num(n.profile.fine_step_m) << "\n"
     << "profile_fine_half_span_m = " << num(n.profile.fine_half_span_m) << "\n"
     << "profile_max_step_m = " << num(n.profile.max_step_m) << "\n"
     << "profile_growth = " << num(n.profile.growth) << "\n"
     << "profile_half_span_m = " << num(n.profile.half_span_m) << "\n";
  return os.str();
}

}  // namespace hwec
