#pragma once

// Whole-machine studies built from the module operations; shared by the CLI
// and the acceptance checks.

#include <vector>

#include "hwec/cryogenics.hpp"
#include "hwec/generator.hpp"
#include "hwec/mechanics.hpp"
#include "hwec/superconductor.hpp"

namespace hwec {

struct FieldSummary {
  /// |B| on the axis at the centre of the second magnet.
  double centre_T = 0.0;
  double max_T = 0.0;
  double mean_T = 0.0;
};

FieldSummary field_summary(const MachineConfig& machine, const WindingField& field);

struct LoadLineStudy {
  LoadLineResult result;
  bool negative_margin = false;
  std::vector<LoadLinePoint> curve;
  std::vector<TemperaturePoint> ic_temperature;
  /// Only meaningful when the margin is positive.
  double current_sharing_temperature_K = 0.0;
};

LoadLineStudy load_line_study(const MachineConfig& machine, const WindingField& field,
                              int curve_points = 101);

/// Coolant mass and stability margin; T_cs follows from the magnet critical
/// current. Throws NegativeMarginError when I_op >= Ic.
CryoReport cryo_report(const MachineConfig& machine, double critical_current_A);

/// Armature current density check on a finished run.
CurrentDensityCheck armature_check(const MachineConfig& machine, const TransientResult& ts);

}  // namespace hwec
