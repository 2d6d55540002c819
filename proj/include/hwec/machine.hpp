#pragma once

// Complete generator description: magnets, armature, operating point, wave,
// rectifier circuit, conductor model and numerical settings.

#include "hwec/circuit.hpp"
#include "hwec/cryogenics.hpp"
#include "hwec/excitation.hpp"
#include "hwec/geometry.hpp"
#include "hwec/magnetostatics.hpp"
#include "hwec/mechanics.hpp"
#include "hwec/superconductor.hpp"

namespace hwec {

struct NumericsConfig {
  FieldOptions field;
  FluxOptions flux;
  AxialFluxProfile::Grid profile;
  LoadLineOptions load_line;
  /// Transient output step; snapped so a wave period holds whole steps.
  double time_step_s = 1e-3;
  /// Cycles discarded before the analysis window.
  int warmup_cycles = 1;
  /// Wave cycles in the analysis window.
  int analysis_cycles = 3;

  void validate() const;
  bool operator==(const NumericsConfig&) const = default;
};

struct MachineConfig {
  MagnetAssembly assembly;
  ArmatureLayout armature;
  double operating_current_A = 179.0;
  double operating_temperature_K = 20.0;
  WaveSpec wave;
  CircuitSpec circuit;
  /// Multiplies the air-core field to stand in for the stator yoke.
  double iron_boost_factor = 1.0;
  /// Peak flux density allowed in the stator gap region.
  double gap_flux_limit_T = 1.5;
  double copper_resistivity_ohm_m = 1.72e-8;
  LiftModel lift;
  CryoConfig cryo;
  MechanicsConfig mechanics;
  NumericsConfig numerics;

  /// Checks every sub-invariant. Whether the operating current lies below
  /// the magnet critical current needs a load-line solve and is left to it.
  void validate() const;
  bool operator==(const MachineConfig&) const = default;
};

/// The tuned operating point: four multi-width magnets, twelve slots, 179 A
/// at 20 K, 1.25 m / 0.167 Hz sinusoidal wave.
MachineConfig build_reference_design();

/// All-4 mm variant of `base` with the same double-pancake count, radial
/// build and plate thickness, re-wound to the same total tape length.
MachineConfig build_single_width_variant(const MachineConfig& base);

/// Per-phase armature resistance from coil geometry and copper resistivity.
double derived_armature_resistance(const ArmatureLayout& layout, double resistivity_ohm_m);

/// Armature resistance the circuit will use: the configured value or the
/// derived one.
double armature_resistance(const MachineConfig& machine);

/// Wound volume of every pack (annulus times pancake heights) and its mass.
double winding_volume_m3(const MagnetAssembly& assembly);
double magnet_mass_kg(const MachineConfig& machine);

/// Total tape length over all packs for every tape name.
double total_tape_length_m(const MagnetAssembly& assembly);

}  // namespace hwec
