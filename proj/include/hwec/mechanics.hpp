#pragma once

// Lorentz-force stress estimates per turn.

#include <iosfwd>
#include <string>
#include <vector>

#include "hwec/magnetostatics.hpp"

namespace hwec {

enum class StressModel {
  /// Every turn carries its own radial load: sigma = J B_z r.
  bjr,
  /// Neighbouring turns that would overlap are pressed into contact and move
  /// as one ring stack with a common radial displacement.
  contact,
};

std::string to_string(StressModel model);
StressModel stress_model_from_string(const std::string& name);

struct MechanicsConfig {
  double youngs_modulus_Pa = 160e9;
  StressModel model = StressModel::contact;

  void validate() const;
  bool operator==(const MechanicsConfig&) const = default;
};

struct TurnStress {
  int pack, pancake, layer, turn;
  double r_m, z_m;
  double hoop_Pa;
  /// Contact pressure on the turn's outer face, negative in compression.
  double radial_Pa;
  double strain;
};

struct StressMap {
  std::vector<TurnStress> turns;
  double max_hoop_Pa = 0.0;
  double mean_hoop_Pa = 0.0;
  double max_abs_radial_Pa = 0.0;
  double youngs_modulus_Pa = 0.0;
  StressModel model = StressModel::bjr;

  void summarize();
};

/// Per-turn stresses at `current_A` from the precomputed winding field.
/// Turns of one pancake are treated as concentric thin rings of the tape
/// cross-section.
StressMap hoop_stress_map(const WindingField& field, double current_A,
                          const MechanicsConfig& config = {});

/// CSV with columns pack, pancake, layer, turn, r_mm, z_mm, sigma_hoop_MPa,
/// sigma_radial_MPa.
void write_stress_csv(std::ostream& os, const StressMap& map);

}  // namespace hwec
