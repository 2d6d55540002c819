#include "hwec/analysis.hpp"

#include <algorithm>

#include "hwec/errors.hpp"

namespace hwec {

FieldSummary field_summary(const MachineConfig& m, const WindingField& field) {
  FieldSummary s;
  const FieldMap map = field.at_current(m.operating_current_A);
  s.max_T = map.max_T;
  s.mean_T = map.mean_T;
  const std::size_t k = std::min<std::size_t>(1, m.assembly.packs.size() - 1);
  const RZPoint centre{0.0, m.assembly.packs[k].axial_position_m};
  s.centre_T = assembly_field(m.assembly, m.operating_current_A, centre, m.iron_boost_factor,
                              m.numerics.field)
                   .magnitude();
  return s;
}

LoadLineStudy load_line_study(const MachineConfig& m, const WindingField& field,
                              int curve_points) {
  LoadLineStudy s;
  s.result = magnet_critical_current(field, m.lift, m.operating_temperature_K,
                                     m.operating_current_A, m.numerics.load_line);
  s.negative_margin = s.result.margin_A <= 0.0;
  const double top = 1.5 * std::max(s.result.critical_current_A, m.operating_current_A);
  s.curve = load_line_curve(field, m.lift, m.operating_temperature_K, top, curve_points);
  double tc = 0.0;
  for (const auto& t : field.tapes()) tc = std::max(tc, t.critical_temperature_K);
  s.ic_temperature =
      ic_temperature_curve(s.result.critical_current_A, m.operating_temperature_K, tc, curve_points);
  if (!s.negative_margin) {
    s.current_sharing_temperature_K = current_sharing_temperature(
        m.operating_current_A, s.result.critical_current_A, m.operating_temperature_K, tc);
  }
  return s;
}

CryoReport cryo_report(const MachineConfig& m, double critical_current_A) {
  current_margin(m.operating_current_A, critical_current_A);
  const auto enthalpy = PropertyTable::load_csv(m.cryo.resolve(m.cryo.copper_enthalpy_file));
  const auto capacity = PropertyTable::load_csv(m.cryo.resolve(m.cryo.winding_heat_capacity_file));
  double tc = 0.0;
  for (const auto& placed : m.assembly.packs) {
    for (const auto& dp : placed.pack.pancakes) tc = std::max(tc, dp.tape.critical_temperature_K);
  }
  CryoReport r;
  r.operating_temperature_K = m.operating_temperature_K;
  r.critical_temperature_K = tc;
  r.magnet_mass_kg = magnet_mass_kg(m);
  r.coolant_mass_kg = coolant_mass(r.magnet_mass_kg, enthalpy, m.cryo.coolant_latent_heat_J_per_kg,
                                   m.operating_temperature_K, m.cryo.warm_temperature_K);
  r.enthalpy_difference_J_per_kg =
      enthalpy(m.cryo.warm_temperature_K) - enthalpy(m.operating_temperature_K);
  r.current_sharing_temperature_K = current_sharing_temperature(
      m.operating_current_A, critical_current_A, m.operating_temperature_K, tc);
  r.stability_margin_J_per_m3 =
      stability_margin(capacity, m.operating_temperature_K, r.current_sharing_temperature_K);
  r.comparison_coolant_mass_kg = m.cryo.comparison_coolant_mass_kg;
  r.comparison_magnet_mass_kg =
      r.comparison_coolant_mass_kg * m.cryo.coolant_latent_heat_J_per_kg / r.enthalpy_difference_J_per_kg;
  r.validate();
  return r;
}

CurrentDensityCheck armature_check(const MachineConfig& m, const TransientResult& ts) {
  return armature_current_density_check(ts, m.armature.conductor_area_m2 * 1e6,
                                        m.cryo.current_density_limit_A_per_mm2,
                                        m.cryo.exceedance_limit, m.cryo.armature_current_limit_A);
}

}  // namespace hwec
