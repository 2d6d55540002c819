#pragma once

// Coolant inventory, enthalpy stability margin and the armature current
// density check, backed by tabulated material properties.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "hwec/circuit.hpp"
#include "hwec/numerics.hpp"

namespace hwec {

/// Monotone cubic interpolation of a property over temperature. Queries
/// outside the tabulated range throw RangeError.
class PropertyTable {
 public:
  PropertyTable() = default;
  PropertyTable(std::string name, std::string units, std::vector<double> T_K,
                std::vector<double> values);

  /// Reads a CSV with '#' comment lines, one header line and (T_K, value)
  /// rows. The unit is taken from the header's second column name.
  static PropertyTable load_csv(const std::filesystem::path& path);

  [[nodiscard]] double operator()(double T_K) const;
  [[nodiscard]] double min_T() const { return interp_.front(); }
  [[nodiscard]] double max_T() const { return interp_.back(); }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::string& units() const { return units_; }
  [[nodiscard]] bool covers(double lo_K, double hi_K) const {
    return lo_K >= min_T() && hi_K <= max_T();
  }

 private:
  std::string name_;
  std::string units_;
  numerics::MonotoneCubic interp_;
};

struct CryoConfig {
  /// Latent heat of vaporisation of the coolant.
  double coolant_latent_heat_J_per_kg = 446e3;
  /// Effective density of the wound magnet used for its mass.
  double winding_density_kg_per_m3 = 8000.0;
  double warm_temperature_K = 300.0;
  /// Directory holding the property CSVs; empty means the built-in data dir.
  std::string data_dir;
  std::string copper_enthalpy_file = "copper_enthalpy.csv";
  std::string winding_heat_capacity_file = "winding_heat_capacity.csv";
  /// Coolant mass the report compares against, with the magnet mass that
  /// would reproduce it.
  double comparison_coolant_mass_kg = 8.23;
  double current_density_limit_A_per_mm2 = 6.0;
  /// Pass when each phase exceeds the limit for less than this fraction.
  double exceedance_limit = 0.05;
  /// Optional absolute armature current limit; 0 disables it.
  double armature_current_limit_A = 140.0;

  void validate() const;
  [[nodiscard]] std::filesystem::path resolve(const std::string& file) const;
  bool operator==(const CryoConfig&) const = default;
};

/// Directory compiled in as the default location of the property tables.
std::filesystem::path default_data_dir();

/// M_H = M_mg (h_Cu(T_warm) - h_Cu(T_op)) / h_H.
double coolant_mass(double magnet_mass_kg, const PropertyTable& copper_enthalpy,
                    double latent_heat_J_per_kg, double T_op_K = 20.0, double T_warm_K = 300.0);

/// Integral of the volumetric heat capacity from T_op to T_cs.
double stability_margin(const PropertyTable& heat_capacity, double T_op_K, double T_cs_K,
                        double rel_tol = 1e-8);

struct CurrentDensityCheck {
  std::array<double, 3> exceedance_fraction{};
  std::array<double, 3> peak_current_A{};
  double peak_density_A_per_mm2 = 0.0;
  bool within_duty = true;
  /// False when a phase peak exceeds the optional absolute current limit.
  bool within_current_limit = true;
};

/// Fraction of samples with |i| / area strictly above the limit.
CurrentDensityCheck armature_current_density_check(const TransientResult& ts,
                                                   double conductor_area_mm2,
                                                   double limit_A_per_mm2,
                                                   double exceedance_limit = 0.05,
                                                   double current_limit_A = 0.0);

struct CryoReport {
  double magnet_mass_kg = 0.0;
  double coolant_mass_kg = 0.0;
  double enthalpy_difference_J_per_kg = 0.0;
  double stability_margin_J_per_m3 = 0.0;
  double operating_temperature_K = 0.0;
  double current_sharing_temperature_K = 0.0;
  double critical_temperature_K = 0.0;
  double comparison_coolant_mass_kg = 0.0;
  /// Magnet mass that would give the comparison coolant mass.
  double comparison_magnet_mass_kg = 0.0;

  void validate() const;
};

}  // namespace hwec
