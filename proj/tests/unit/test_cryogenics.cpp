#include <doctest.h>

#include <cmath>

#include "hwec/cryogenics.hpp"
#include "hwec/errors.hpp"
#include "hwec/numerics.hpp"

using namespace hwec;

namespace {

PropertyTable synthetic_enthalpy() {
  // h(20) = 1000, h(300) = 80000: difference 79 kJ/kg.
  return PropertyTable("h", "J_per_kg", {4, 20, 100, 300}, {0, 1000, 30000, 80000});
}

TransientResult constant_currents(double i) {
  TransientResult ts;
  for (int k = 0; k < 10; ++k) {
    ts.t_s.push_back(k * 0.1);
    for (auto& c : ts.current_A) c.push_back(i);
  }
  return ts;
}

}  // namespace

TEST_CASE("coolant mass") {
  const auto h = synthetic_enthalpy();
  CHECK(coolant_mass(10.0, h, 446e3) == doctest::Approx(10.0 * 79e3 / 446e3).epsilon(1e-14));
  CHECK(coolant_mass(10.0, h, 446e3) == doctest::Approx(1.771).epsilon(1e-3));
  CHECK(coolant_mass(0.0, h, 446e3) == 0.0);
  CHECK(coolant_mass(37.0, h, 446e3) == 3.7 * coolant_mass(10.0, h, 446e3));
  CHECK_THROWS_AS(coolant_mass(1.0, h, 446e3, 2.0, 300.0), RangeError);
}

TEST_CASE("stability margin") {
  const PropertyTable c("c", "J_per_m3K", {4, 100}, {1000, 1000});
  CHECK(stability_margin(c, 20, 32) == doctest::Approx(12000.0).epsilon(1e-12));
  CHECK(stability_margin(c, 20, 20) == 0.0);
  CHECK_THROWS_AS(stability_margin(c, 20, 200), RangeError);
  CHECK_THROWS_AS(stability_margin(c, 30, 20), DomainError);
}

TEST_CASE("property tables reject bad data and out-of-range queries") {
  CHECK_THROWS_AS(PropertyTable("x", "u", {1, 1}, {0, 1}), ValidationError);
  const auto h = synthetic_enthalpy();
  CHECK_THROWS_AS(h(301.0), RangeError);
  CHECK(h(20.0) == 1000.0);
}

TEST_CASE("shipped tables load and integrate consistently") {
  const auto dir = default_data_dir();
  const auto h = PropertyTable::load_csv(dir / "copper_enthalpy.csv");
  const auto c = PropertyTable::load_csv(dir / "winding_heat_capacity.csv");
  CHECK(h.units() == "J_per_kg");
  CHECK(h.min_T() <= 4.0);
  CHECK(h.max_T() >= 300.0);
  // Copper gains roughly 80 kJ/kg between 20 K and room temperature.
  CHECK(h(300) - h(20) == doctest::Approx(80e3).epsilon(0.03));
  const double adaptive = stability_margin(c, 20.0, 32.06);
  const double trap = numerics::integrate_trapezoid([&](double T) { return c(T); }, 20.0, 32.06, 10000);
  CHECK(std::abs(adaptive - trap) < 1e-6 * adaptive);
}

TEST_CASE("armature current density check") {
  const auto zero = armature_current_density_check(constant_currents(0.0), 14.0, 6.0);
  for (double f : zero.exceedance_fraction) CHECK(f == 0.0);
  const auto edge = armature_current_density_check(constant_currents(84.0), 14.0, 6.0);
  for (double f : edge.exceedance_fraction) CHECK(f == 0.0);
  CHECK(edge.within_duty);
  const auto over = armature_current_density_check(constant_currents(-90.0), 14.0, 6.0, 0.05, 85.0);
  for (double f : over.exceedance_fraction) CHECK(f == 1.0);
  CHECK_FALSE(over.within_duty);
  CHECK_FALSE(over.within_current_limit);
}

TEST_CASE("cryo report invariants") {
  CryoReport r;
  r.operating_temperature_K = 20;
  r.current_sharing_temperature_K = 32;
  r.critical_temperature_K = 92;
  CHECK_NOTHROW(r.validate());
  r.current_sharing_temperature_K = 95;
  CHECK_THROWS_AS(r.validate(), ValidationError);
}
