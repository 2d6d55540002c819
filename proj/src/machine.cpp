#include "hwec/machine.hpp"

#include <cmath>
#include <numbers>

#include "hwec/errors.hpp"

namespace hwec {

void NumericsConfig::validate() const {
  if (field.subfilaments < 1 || flux.field.subfilaments < 1) {
    throw ValidationError("numerics: subfilaments must be at least 1");
  }
  if (!(flux.rel_tol > 0.0)) throw ValidationError("numerics: flux tolerance must be positive");
  if (!(profile.fine_step_m > 0.0) || !(profile.max_step_m >= profile.fine_step_m) ||
      !(profile.growth >= 1.0) || !(profile.half_span_m > profile.fine_half_span_m)) {
    throw ValidationError("numerics: inconsistent flux profile grid");
  }
  if (!(load_line.tolerance_A > 0.0) || load_line.max_iterations < 1) {
    throw ValidationError("numerics: load line tolerance and iterations must be positive");
  }
  if (!(time_step_s > 0.0)) throw ValidationError("numerics: time step must be positive");
  if (warmup_cycles < 0) throw ValidationError("numerics: warmup cycles must be >= 0");
  if (analysis_cycles < 1) throw ValidationError("numerics: analysis cycles must be >= 1");
}

void MachineConfig::validate() const {
  assembly.validate();
  armature.validate(static_cast<int>(assembly.packs.size()));
  if (!(operating_current_A > 0.0)) throw ValidationError("machine: operating current must be positive");
  for (const auto& placed : assembly.packs) {
    for (const auto& dp : placed.pack.pancakes) {
      if (dp.tape.reference_temperature_K != operating_temperature_K) {
        throw ValidationError("machine: tape '" + dp.tape.name +
                              "' reference temperature must equal the operating temperature");
      }
    }
  }
  if (armature.coil_inner_radius_m() <= assembly.packs.front().pack.outer_radius_m()) {
    throw ValidationError("machine: armature coils overlap the magnets");
  }
  wave.validate();
  circuit.validate();
  if (!(iron_boost_factor >= 1.0)) throw ValidationError("machine: iron boost factor must be >= 1");
  if (!(gap_flux_limit_T > 0.0)) throw ValidationError("machine: gap flux limit must be positive");
  if (!(copper_resistivity_ohm_m > 0.0)) throw ValidationError("machine: resistivity must be positive");
  lift.validate();
  cryo.validate();
  mechanics.validate();
  numerics.validate();
}

namespace {

constexpr double kRadialBuild = 22.4e-3;
constexpr double kInnerRadius = 71.6e-3;
constexpr int kTurns4 = 95;
constexpr int kTurns6 = 143;
constexpr double kPlate = 0.5e-3;

TapeSpec tape(const char* name, double width, int turns, double ic_ref) {
  TapeSpec t;
  t.name = name;
  t.width_m = width;
  t.thickness_m = kRadialBuild / turns;
  t.ic_ref_A = ic_ref;
  t.reference_temperature_K = 20.0;
  t.critical_temperature_K = 92.0;
  return t;
}

}  // namespace

MachineConfig build_reference_design() {
  MachineConfig m;
  // Free constants fitted by tools/calibrate.
  m.iron_boost_factor = 1.140922;
  m.lift = LiftModel::kim_model(0.025596, 0.231409, 0.772438);
  const TapeSpec t4 = tape("4mm", 4e-3, kTurns4, 1050.0985);
  const TapeSpec t6 = tape("6mm", 6e-3, kTurns6, 1.5 * t4.ic_ref_A);

  // Wide tape in the two outer double pancakes at each end.
  std::vector<DoublePancake> dps;
  for (int i = 0; i < 13; ++i) {
    const bool wide = i < 2 || i > 10;
    DoublePancake dp;
    dp.tape = wide ? t6 : t4;
    dp.inner_radius_m = kInnerRadius;
    dp.turns_per_pancake = wide ? kTurns6 : kTurns4;
    dps.push_back(dp);
  }
  const WindingPack pack = stack_pancakes(std::move(dps), kPlate);
  m.assembly = alternating_assembly(pack, 4, 1.150 / 4.0, 0.1318, 0.0345);

  m.armature.turns_per_coil = 579;
  m.operating_current_A = 179.0;
  m.operating_temperature_K = 20.0;
  m.wave = {WaveForm::sinusoidal, 1.25, 0.167, 0.0};
  m.circuit = CircuitSpec{};
  m.circuit.armature_resistance_ohm = 2.625;
  return m;
}

MachineConfig build_single_width_variant(const MachineConfig& base) {
  MachineConfig m = base;
  const double length = total_tape_length_m(base.assembly);
  const auto& ref = base.assembly.packs.front().pack;
  const std::size_t n_dp = ref.pancakes.size();
  const double n_packs = static_cast<double>(base.assembly.packs.size());
  const double build = ref.total_width_m();
  const double r_mean = ref.inner_radius_m() + 0.5 * build;
  // Whole turns closest to the same mean radius, then the inner radius that
  // makes the length exact.
  const double per_pancake = length / (n_packs * 2.0 * static_cast<double>(n_dp));
  const int turns = static_cast<int>(std::lround(per_pancake / (2.0 * std::numbers::pi * r_mean)));
  const double r_in = per_pancake / (2.0 * std::numbers::pi * turns) - 0.5 * build;

  TapeSpec narrow;
  for (const auto& dp : ref.pancakes) {
    if (dp.tape.name == "4mm") narrow = dp.tape;
  }
  if (narrow.name.empty()) throw ValidationError("single-width variant: base has no 4mm tape");
  narrow.thickness_m = build / turns;
  std::vector<DoublePancake> dps(n_dp);
  for (auto& dp : dps) {
    dp.tape = narrow;
    dp.inner_radius_m = r_in;
    dp.turns_per_pancake = turns;
  }
  const WindingPack pack = stack_pancakes(std::move(dps), ref.plate_thickness_m);
  const auto& a = base.assembly;
  m.assembly = alternating_assembly(pack, static_cast<int>(a.packs.size()), a.pole_pitch_m,
                                    a.cryostat_height_m, a.cryostat_width_m);
  return m;
}

double derived_armature_resistance(const ArmatureLayout& layout, double resistivity_ohm_m) {
  const double r_mean = 0.5 * (layout.coil_inner_radius_m() + layout.coil_outer_radius_m());
  const double wire = layout.coils_per_phase * layout.turns_per_coil * 2.0 * std::numbers::pi * r_mean;
  return resistivity_ohm_m * wire / layout.conductor_area_m2;
}

double armature_resistance(const MachineConfig& machine) {
  return machine.circuit.armature_resistance_ohm.value_or(
      derived_armature_resistance(machine.armature, machine.copper_resistivity_ohm_m));
}

double winding_volume_m3(const MagnetAssembly& assembly) {
  double v = 0.0;
  for (const auto& placed : assembly.packs) {
    for (const auto& dp : placed.pack.pancakes) {
      const double ro = dp.outer_radius_m();
      const double ri = dp.inner_radius_m;
      v += std::numbers::pi * (ro * ro - ri * ri) * dp.height_m();
    }
  }
  return v;
}

double magnet_mass_kg(const MachineConfig& machine) {
  return winding_volume_m3(machine.assembly) * machine.cryo.winding_density_kg_per_m3;
}

double total_tape_length_m(const MagnetAssembly& assembly) {
  double sum = 0.0;
  for (const auto& [name, len] : tape_length_of(assembly)) sum += len;
  return sum;
}

}  // namespace hwec
