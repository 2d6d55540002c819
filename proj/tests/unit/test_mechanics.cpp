#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "fixtures.hpp"
#include "hwec/mechanics.hpp"

using namespace hwec;

TEST_CASE("stress vanishes at zero current and scales with I squared") {
  const MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  for (auto model : {StressModel::bjr, StressModel::contact}) {
    MechanicsConfig c{160e9, model};
    const StressMap zero = hoop_stress_map(f, 0.0, c);
    CHECK(zero.max_hoop_Pa == 0.0);
    CHECK(zero.max_abs_radial_Pa == 0.0);
    const StressMap a = hoop_stress_map(f, 100.0, c);
    const StressMap b = hoop_stress_map(f, 250.0, c);
    for (std::size_t i = 0; i < a.turns.size(); ++i) {
      CHECK(std::abs(b.turns[i].hoop_Pa - 6.25 * a.turns[i].hoop_Pa) <=
            1e-10 * std::abs(b.turns[i].hoop_Pa) + 1e-300);
    }
  }
}

TEST_CASE("BJr hoop stress of each turn") {
  const MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const StressMap s = hoop_stress_map(f, 179.0, {160e9, StressModel::bjr});
  for (std::size_t i = 0; i < s.turns.size(); i += 37) {
    const auto& t = f.turns()[i];
    const auto& tape = f.tape(i);
    const double expected =
        t.sign * 179.0 * 179.0 * f.per_amp()[i].bz_T * t.radius_m / (tape.width_m * tape.thickness_m);
    CHECK(s.turns[i].hoop_Pa == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s.turns[i].strain == doctest::Approx(s.turns[i].hoop_Pa / 160e9));
  }
}

TEST_CASE("contact model keeps the radial force balance of every pancake") {
  const MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const double I = 179.0;
  const StressMap s = hoop_stress_map(f, I, {160e9, StressModel::contact});
  std::map<std::tuple<int, int, int>, std::pair<double, double>> balance;
  for (std::size_t i = 0; i < s.turns.size(); ++i) {
    const auto& t = f.turns()[i];
    const auto& tape = f.tape(i);
    auto& [load, carried] = balance[{t.pack, t.pancake, t.layer}];
    load += t.sign * I * I * f.per_amp()[i].bz_T;
    carried += s.turns[i].hoop_Pa * tape.width_m * tape.thickness_m / t.radius_m;
    CHECK(s.turns[i].radial_Pa <= 1e-9 * s.max_abs_radial_Pa);
  }
  for (const auto& [key, v] : balance) CHECK(v.second == doctest::Approx(v.first).epsilon(1e-10));
}

TEST_CASE("stress CSV and model names") {
  StressMap s;
  s.turns.push_back({0, 1, 0, 2, 0.1, -0.02, 2.5e7, 0.0, 2.5e7 / 160e9});
  s.summarize();
  CHECK(s.max_hoop_Pa == 2.5e7);
  std::ostringstream os;
  write_stress_csv(os, s);
  CHECK(os.str() == "pack,pancake,layer,turn,r_mm,z_mm,sigma_hoop_MPa,sigma_radial_MPa\n0,1,0,2,100,-20,25,0\n");
  CHECK(stress_model_from_string("bjr") == StressModel::bjr);
}
