#include "hwec/cryogenics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hwec/errors.hpp"

#ifndef HWEC_DATA_DIR
#define HWEC_DATA_DIR "data"
#endif

namespace hwec {

PropertyTable::PropertyTable(std::string name, std::string units, std::vector<double> T_K,
                             std::vector<double> values)
    : name_(std::move(name)), units_(std::move(units)) {
  if (T_K.size() < 2 || T_K.size() != values.size()) {
    throw ValidationError("property table '" + name_ + "': need matching T and value columns");
  }
  for (std::size_t i = 1; i < T_K.size(); ++i) {
    if (!(T_K[i] > T_K[i - 1])) {
      throw ValidationError("property table '" + name_ + "': temperatures must increase strictly");
    }
  }
  interp_ = numerics::MonotoneCubic(std::move(T_K), std::move(values));
}

PropertyTable PropertyTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open property table " + path.string());
  std::string line;
  std::string header;
  std::vector<double> t, v;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = line;
      continue;
    }
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    }
    try {
      t.push_back(std::stod(a));
      v.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
  }
  // Header "T_K,h_J_per_kg": unit is whatever follows the first underscore.
  std::string units;
  if (const auto comma = header.find(','); comma != std::string::npos) {
    const std::string col = header.substr(comma + 1);
    const auto us = col.find('_');
    units = us == std::string::npos ? col : col.substr(us + 1);
  }
  return PropertyTable(path.stem().string(), units, std::move(t), std::move(v));
}

double PropertyTable::operator()(double T_K) const {
  if (!(T_K >= min_T() && T_K <= max_T())) {
    std::ostringstream os;
    os << "property table '" << name_ << "': " << T_K << " K outside [" << min_T() << ", "
       << max_T() << "] K";
    throw RangeError(os.str());
  }
  return interp_(T_K);
}

void CryoConfig::validate() const {
  if (!(coolant_latent_heat_J_per_kg > 0.0)) throw ValidationError("cryo: latent heat must be positive");
  if (!(winding_density_kg_per_m3 > 0.0)) throw ValidationError("cryo: winding density must be positive");
  if (!(current_density_limit_A_per_mm2 > 0.0)) {
    throw ValidationError("cryo: current density limit must be positive");
  }
  if (!(exceedance_limit >= 0.0 && exceedance_limit <= 1.0)) {
    throw ValidationError("cryo: exceedance limit must lie in [0, 1]");
  }
  if (!(armature_current_limit_A >= 0.0)) throw ValidationError("cryo: current limit must be >= 0");
  if (!(comparison_coolant_mass_kg >= 0.0)) throw ValidationError("cryo: comparison mass must be >= 0");
}

std::filesystem::path default_data_dir() { return HWEC_DATA_DIR; }

std::filesystem::path CryoConfig::resolve(const std::string& file) const {
  const std::filesystem::path p(file);
  if (p.is_absolute()) return p;
  return (data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir)) / p;
}

double coolant_mass(double magnet_mass_kg, const PropertyTable& copper_enthalpy,
                    double latent_heat_J_per_kg, double T_op_K, double T_warm_K) {
  if (!(magnet_mass_kg >= 0.0)) throw ValidationError("coolant mass: magnet mass must be >= 0");
  if (!(latent_heat_J_per_kg > 0.0)) throw ValidationError("coolant mass: latent heat must be positive");
  if (!copper_enthalpy.covers(T_op_K, T_warm_K)) {
    std::ostringstream os;
    os << "coolant mass: enthalpy table does not cover [" << T_op_K << ", " << T_warm_K << "] K";
    throw RangeError(os.str());
  }
  return magnet_mass_kg * (copper_enthalpy(T_warm_K) - copper_enthalpy(T_op_K)) /
         latent_heat_J_per_kg;
}

double stability_margin(const PropertyTable& heat_capacity, double T_op_K, double T_cs_K,
                        double rel_tol) {
  if (!(T_cs_K >= T_op_K)) throw DomainError("stability margin: T_cs below T_op");
  if (!heat_capacity.covers(T_op_K, T_cs_K)) {
    std::ostringstream os;
    os << "stability margin: heat capacity table does not cover [" << T_op_K << ", " << T_cs_K
       << "] K";
    throw RangeError(os.str());
  }
  if (T_cs_K == T_op_K) return 0.0;
  return numerics::integrate_adaptive([&](double T) { return heat_capacity(T); }, T_op_K, T_cs_K,
                                      rel_tol);
}

CurrentDensityCheck armature_current_density_check(const TransientResult& ts,
                                                   double conductor_area_mm2,
                                                   double limit_A_per_mm2,
                                                   double exceedance_limit,
                                                   double current_limit_A) {
  if (!(conductor_area_mm2 > 0.0) || !(limit_A_per_mm2 > 0.0)) {
    throw ValidationError("current density check: area and limit must be positive");
  }
  CurrentDensityCheck c;
  const std::size_t n = ts.size();
  for (int k = 0; k < 3; ++k) {
    std::size_t over = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double i = std::abs(ts.current_A[k][j]);
      if (i / conductor_area_mm2 > limit_A_per_mm2) ++over;
      c.peak_current_A[k] = std::max(c.peak_current_A[k], i);
    }
    c.exceedance_fraction[k] = n ? static_cast<double>(over) / static_cast<double>(n) : 0.0;
    c.peak_density_A_per_mm2 = std::max(c.peak_density_A_per_mm2, c.peak_current_A[k] / conductor_area_mm2);
    c.within_duty = c.within_duty && c.exceedance_fraction[k] < exceedance_limit;
    if (current_limit_A > 0.0 && c.peak_current_A[k] > current_limit_A) c.within_current_limit = false;
  }
  return c;
}

void CryoReport::validate() const {
  if (magnet_mass_kg < 0.0 || coolant_mass_kg < 0.0 || stability_margin_J_per_m3 < 0.0) {
    throw ValidationError("cryo report: masses and margin must be non-negative");
  }
  if (!(operating_temperature_K < current_sharing_temperature_K &&
        current_sharing_temperature_K < critical_temperature_K)) {
    throw ValidationError("cryo report: need T_op < T_cs < T_C");
  }
}

}  // namespace hwec
