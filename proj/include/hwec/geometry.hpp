#pragma once

// Declarative machine geometry: tapes, double pancakes, winding packs, the
// magnet stack on the actuator and the armature coils on the stator.
// Lengths are in metres, currents in amperes, temperatures in kelvin.

#include <map>
#include <string>
#include <vector>

namespace hwec {

struct TapeSpec {
  std::string name;
  double width_m = 0.0;
  double thickness_m = 0.0;
  /// Critical current at the reference temperature with lift factor 1.
  double ic_ref_A = 0.0;
  double reference_temperature_K = 20.0;
  double critical_temperature_K = 92.0;

  void validate() const;
  bool operator==(const TapeSpec&) const = default;
};

/// Two pancakes wound from one tape piece and stacked axially.
struct DoublePancake {
  TapeSpec tape;
  double inner_radius_m = 0.0;
  int turns_per_pancake = 0;
  /// Axial centre relative to the winding-pack midplane.
  double axial_center_m = 0.0;
  int polarity = +1;

  [[nodiscard]] double outer_radius_m() const {
    return inner_radius_m + turns_per_pancake * tape.thickness_m;
  }
  [[nodiscard]] double height_m() const { return 2.0 * tape.width_m; }
  [[nodiscard]] double bottom_m() const { return axial_center_m - tape.width_m; }
  [[nodiscard]] double top_m() const { return axial_center_m + tape.width_m; }
  /// Radius of turn `turn` (0 = innermost), taken at the tape mid-thickness.
  [[nodiscard]] double turn_radius_m(int turn) const {
    return inner_radius_m + (turn + 0.5) * tape.thickness_m;
  }
  void validate() const;
  bool operator==(const DoublePancake&) const = default;
};

struct WindingPack {
  /// Ordered bottom to top.
  std::vector<DoublePancake> pancakes;
  /// Insulation plate between adjacent double pancakes.
  double plate_thickness_m = 0.5e-3;

  [[nodiscard]] double total_height_m() const;
  /// Radial build: outermost radius minus innermost radius.
  [[nodiscard]] double total_width_m() const;
  [[nodiscard]] double inner_radius_m() const;
  [[nodiscard]] double outer_radius_m() const;
  [[nodiscard]] int turn_count() const;

  /// Checks per-pancake invariants and that pancakes plus plates tile the height.
  void validate() const;
  bool operator==(const WindingPack&) const = default;
};

/// Builds a pack from a bottom-to-top list of double pancakes, centring the
/// stack on z = 0 with `plate_thickness` between neighbours.
WindingPack stack_pancakes(std::vector<DoublePancake> pancakes, double plate_thickness_m);

struct PlacedPack {
  WindingPack pack;
  double axial_position_m = 0.0;
  int polarity = +1;
  bool operator==(const PlacedPack&) const = default;
};

struct MagnetAssembly {
  std::vector<PlacedPack> packs;
  double pole_pitch_m = 0.0;
  double cryostat_height_m = 0.0;
  double cryostat_width_m = 0.0;

  void validate() const;
  bool operator==(const MagnetAssembly&) const = default;
};

/// `count` copies of `pack` at `pole_pitch` spacing centred on z = 0 with
/// alternating polarity starting at +1.
MagnetAssembly alternating_assembly(const WindingPack& pack, int count, double pole_pitch_m,
                                    double cryostat_height_m, double cryostat_width_m);

/// One physical turn reduced to a filament.
struct TurnLoop {
  double radius_m = 0.0;
  double z_m = 0.0;
  /// +1 or -1: pack polarity times pancake polarity.
  int sign = +1;
  /// Axial tape width, used when a turn is split into sub-filaments.
  double tape_width_m = 0.0;
  int pack = 0;
  int pancake = 0;  // double-pancake index inside the pack
  int layer = 0;    // 0 = lower pancake of the DP, 1 = upper
  int turn = 0;     // 0 = innermost
};

/// One loop per physical turn, sorted by (z, radius).
std::vector<TurnLoop> turn_loops_of(const WindingPack& pack);
std::vector<TurnLoop> turn_loops_of(const MagnetAssembly& assembly);

/// Total tape length keyed by tape name.
std::map<std::string, double> tape_length_of(const WindingPack& pack);
std::map<std::string, double> tape_length_of(const MagnetAssembly& assembly);

/// Coil on the stator; its aperture is the annulus between the radii.
struct ArmatureCoil {
  int phase = 0;  // 0, 1, 2
  int sense = +1; // winding direction relative to the phase
  double axial_center_m = 0.0;
  double inner_radius_m = 0.0;
  double outer_radius_m = 0.0;
  double height_m = 0.0;
  int turns = 1;
};

struct ArmatureLayout {
  int slot_count = 12;
  int phases = 3;
  int coils_per_phase = 4;
  int slots_per_pole = 3;
  double coil_height_m = 0.050;
  double coil_radial_width_m = 0.220;
  int turns_per_coil = 1;
  double air_gap_m = 0.010;
  /// Copper cross-section of one armature conductor.
  double conductor_area_m2 = 14e-6;
  /// Radius of the actuator surface the gap is measured from.
  double actuator_radius_m = 0.100;
  /// Axial slot spacing; 0 means pole pitch / slots_per_pole.
  double slot_pitch_m = 0.0;

  [[nodiscard]] double coil_inner_radius_m() const { return actuator_radius_m + air_gap_m; }
  [[nodiscard]] double coil_outer_radius_m() const {
    return coil_inner_radius_m() + coil_radial_width_m;
  }
  void validate(int magnet_count) const;
  bool operator==(const ArmatureLayout&) const = default;
};

/// Stator coils centred on z = 0. Slot j sits at electrical angle 60 deg * j
/// and is assigned the phase/sense that angle belongs to.
std::vector<ArmatureCoil> armature_coils(const ArmatureLayout& layout, double pole_pitch_m);

}  // namespace hwec
