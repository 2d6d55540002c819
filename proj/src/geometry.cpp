#include "hwec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "hwec/errors.hpp"

namespace hwec {

namespace {

constexpr double kTilingTolerance = 1e-9;  // m

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

}  // namespace

void TapeSpec::validate() const {
  if (!(width_m > 0.0)) fail("tape '" + name + "': width must be positive");
  if (!(thickness_m > 0.0)) fail("tape '" + name + "': thickness must be positive");
  if (!(ic_ref_A > 0.0)) fail("tape '" + name + "': reference Ic must be positive");
  if (!(critical_temperature_K > reference_temperature_K)) {
    fail("tape '" + name + "': critical temperature must exceed reference temperature");
  }
}

void DoublePancake::validate() const {
  tape.validate();
  if (!(inner_radius_m > 0.0)) fail("double pancake: inner radius must be positive");
  if (turns_per_pancake < 1) fail("double pancake: need at least one turn per pancake");
  if (polarity != 1 && polarity != -1) fail("double pancake: polarity must be +1 or -1");
}

double WindingPack::total_height_m() const {
  if (pancakes.empty()) return 0.0;
  return pancakes.back().top_m() - pancakes.front().bottom_m();
}

double WindingPack::inner_radius_m() const {
  double r = pancakes.empty() ? 0.0 : pancakes.front().inner_radius_m;
  for (const auto& dp : pancakes) r = std::min(r, dp.inner_radius_m);
  return r;
}

double WindingPack::outer_radius_m() const {
  double r = 0.0;
  for (const auto& dp : pancakes) r = std::max(r, dp.outer_radius_m());
  return r;
}

double WindingPack::total_width_m() const {
  return pancakes.empty() ? 0.0 : outer_radius_m() - inner_radius_m();
}

int WindingPack::turn_count() const {
  int n = 0;
  for (const auto& dp : pancakes) n += 2 * dp.turns_per_pancake;
  return n;
}

void WindingPack::validate() const {
  if (pancakes.empty()) fail("winding pack: no double pancakes");
  if (plate_thickness_m < 0.0) fail("winding pack: negative plate thickness");
  for (const auto& dp : pancakes) dp.validate();
  for (std::size_t i = 1; i < pancakes.size(); ++i) {
    const double gap = pancakes[i].bottom_m() - pancakes[i - 1].top_m();
    if (std::abs(gap - plate_thickness_m) > kTilingTolerance) {
      std::ostringstream os;
      os << "winding pack: gap between double pancakes " << i - 1 << " and " << i << " is "
         << gap * 1e3 << " mm, expected plate thickness " << plate_thickness_m * 1e3 << " mm";
      fail(os.str());
    }
  }
}

WindingPack stack_pancakes(std::vector<DoublePancake> pancakes, double plate_thickness_m) {
  WindingPack pack;
  pack.plate_thickness_m = plate_thickness_m;
  double height = 0.0;
  for (const auto& dp : pancakes) height += dp.height_m();
  if (!pancakes.empty()) height += plate_thickness_m * static_cast<double>(pancakes.size() - 1);
  double cursor = -0.5 * height;
  for (auto& dp : pancakes) {
    dp.axial_center_m = cursor + 0.5 * dp.height_m();
    cursor += dp.height_m() + plate_thickness_m;
  }
  pack.pancakes = std::move(pancakes);
  return pack;
}

void MagnetAssembly::validate() const {
  if (packs.empty()) fail("magnet assembly: no winding packs");
  if (!(pole_pitch_m > 0.0)) fail("magnet assembly: pole pitch must be positive");
  for (std::size_t i = 0; i < packs.size(); ++i) {
    packs[i].pack.validate();
    if (packs[i].polarity != 1 && packs[i].polarity != -1) {
      fail("magnet assembly: pack polarity must be +1 or -1");
    }
    if (i == 0) continue;
    if (!(packs[i].axial_position_m > packs[i - 1].axial_position_m)) {
      fail("magnet assembly: pack positions must be strictly increasing");
    }
    if (packs[i].polarity * packs[i - 1].polarity != -1) {
      fail("magnet assembly: adjacent magnets must have opposite polarity");
    }
    const double clearance = (packs[i].axial_position_m + packs[i].pack.pancakes.front().bottom_m()) -
                             (packs[i - 1].axial_position_m + packs[i - 1].pack.pancakes.back().top_m());
    if (clearance < 0.0) fail("magnet assembly: winding packs overlap");
  }
}

MagnetAssembly alternating_assembly(const WindingPack& pack, int count, double pole_pitch_m,
                                    double cryostat_height_m, double cryostat_width_m) {
  MagnetAssembly assembly;
  assembly.pole_pitch_m = pole_pitch_m;
  assembly.cryostat_height_m = cryostat_height_m;
  assembly.cryostat_width_m = cryostat_width_m;
  for (int i = 0; i < count; ++i) {
    const double z = (i - 0.5 * (count - 1)) * pole_pitch_m;
    assembly.packs.push_back({pack, z, i % 2 == 0 ? +1 : -1});
  }
  return assembly;
}

namespace {

void append_loops(const WindingPack& pack, int pack_index, double offset, int polarity,
                  std::vector<TurnLoop>& out) {
  for (std::size_t p = 0; p < pack.pancakes.size(); ++p) {
    const auto& dp = pack.pancakes[p];
    for (int layer = 0; layer < 2; ++layer) {
      const double z = offset + dp.axial_center_m + (layer == 0 ? -0.5 : 0.5) * dp.tape.width_m;
      for (int t = 0; t < dp.turns_per_pancake; ++t) {
        TurnLoop loop;
        loop.radius_m = dp.turn_radius_m(t);
        loop.z_m = z;
        loop.sign = polarity * dp.polarity;
        loop.tape_width_m = dp.tape.width_m;
        loop.pack = pack_index;
        loop.pancake = static_cast<int>(p);
        loop.layer = layer;
        loop.turn = t;
        out.push_back(loop);
      }
    }
  }
}

void sort_loops(std::vector<TurnLoop>& loops) {
  std::stable_sort(loops.begin(), loops.end(), [](const TurnLoop& a, const TurnLoop& b) {
    return std::tie(a.z_m, a.radius_m, a.pack) < std::tie(b.z_m, b.radius_m, b.pack);
  });
}

}  // namespace

std::vector<TurnLoop> turn_loops_of(const WindingPack& pack) {
  std::vector<TurnLoop> loops;
  loops.reserve(static_cast<std::size_t>(pack.turn_count()));
  append_loops(pack, 0, 0.0, +1, loops);
  sort_loops(loops);
  return loops;
}

std::vector<TurnLoop> turn_loops_of(const MagnetAssembly& assembly) {
  std::vector<TurnLoop> loops;
  for (std::size_t i = 0; i < assembly.packs.size(); ++i) {
    const auto& placed = assembly.packs[i];
    append_loops(placed.pack, static_cast<int>(i), placed.axial_position_m, placed.polarity, loops);
  }
  sort_loops(loops);
  return loops;
}

std::map<std::string, double> tape_length_of(const WindingPack& pack) {
  std::map<std::string, double> out;
  for (const auto& dp : pack.pancakes) {
    double per_pancake = 0.0;
    for (int t = 0; t < dp.turns_per_pancake; ++t) {
      per_pancake += 2.0 * std::numbers::pi * dp.turn_radius_m(t);
    }
    out[dp.tape.name] += 2.0 * per_pancake;
  }
  return out;
}

std::map<std::string, double> tape_length_of(const MagnetAssembly& assembly) {
  std::map<std::string, double> out;
  for (const auto& placed : assembly.packs) {
    for (const auto& [name, length] : tape_length_of(placed.pack)) out[name] += length;
  }
  return out;
}

void ArmatureLayout::validate(int magnet_count) const {
  if (phases != 3) fail("armature: only three-phase layouts are supported");
  if (slots_per_pole != 3) fail("armature: slots per pole must be 3");
  if (slot_count != slots_per_pole * magnet_count) {
    fail("armature: slot count must equal slots per pole times magnet count");
  }
  if (coils_per_phase * phases != slot_count) {
    fail("armature: coils per phase times phases must equal slot count");
  }
  if (!(coil_height_m > 0.0) || !(coil_radial_width_m > 0.0)) {
    fail("armature: coil height and radial width must be positive");
  }
  if (turns_per_coil < 1) fail("armature: need at least one turn per coil");
  if (!(air_gap_m > 0.0)) fail("armature: air gap must be positive");
  if (!(conductor_area_m2 > 0.0)) fail("armature: conductor area must be positive");
  if (!(actuator_radius_m > 0.0)) fail("armature: actuator radius must be positive");
  if (slot_pitch_m < 0.0) fail("armature: slot pitch must be non-negative");
}

std::vector<ArmatureCoil> armature_coils(const ArmatureLayout& layout, double pole_pitch_m) {
  const double pitch = layout.slot_pitch_m > 0.0 ? layout.slot_pitch_m
                                                 : pole_pitch_m / layout.slots_per_pole;
  const double slot_angle = 180.0 / layout.slots_per_pole;
  // 60-degree sectors: +A, -C, +B, -A, +C, -B.
  static constexpr int kPhase[6] = {0, 2, 1, 0, 2, 1};
  static constexpr int kSense[6] = {+1, -1, +1, -1, +1, -1};
  std::vector<ArmatureCoil> coils;
  coils.reserve(static_cast<std::size_t>(layout.slot_count));
  for (int j = 0; j < layout.slot_count; ++j) {
    const int sector = static_cast<int>(std::lround(j * slot_angle / 60.0)) % 6;
    ArmatureCoil coil;
    coil.phase = kPhase[sector];
    coil.sense = kSense[sector];
    coil.axial_center_m = (j - 0.5 * (layout.slot_count - 1)) * pitch;
    coil.inner_radius_m = layout.coil_inner_radius_m();
    coil.outer_radius_m = layout.coil_outer_radius_m();
    coil.height_m = layout.coil_height_m;
    coil.turns = layout.turns_per_coil;
    coils.push_back(coil);
  }
  return coils;
}

}  // namespace hwec
