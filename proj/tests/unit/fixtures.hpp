#pragma once

#include <cmath>

#include "hwec/machine.hpp"

namespace hwec::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Reference machine with a much smaller winding so field solves are quick.
inline MachineConfig small_machine() {
  MachineConfig m = build_reference_design();
  const auto& ref = m.assembly.packs.front().pack.pancakes;
  TapeSpec wide = ref.front().tape;
  TapeSpec narrow = ref[5].tape;
  std::vector<DoublePancake> dps(3);
  dps[0].tape = wide;
  dps[0].turns_per_pancake = 30;
  dps[1].tape = narrow;
  dps[1].turns_per_pancake = 20;
  dps[2] = dps[0];
  for (auto& dp : dps) dp.inner_radius_m = 0.0716;
  const WindingPack pack = stack_pancakes(dps, 0.5e-3);
  m.assembly = alternating_assembly(pack, 4, m.assembly.pole_pitch_m, 0.05, 0.02);
  m.numerics.warmup_cycles = 0;
  m.numerics.analysis_cycles = 1;
  m.numerics.time_step_s = 5e-3;
  return m;
}

}  // namespace hwec::test
