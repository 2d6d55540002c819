#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "hwec/errors.hpp"
#include "hwec/superconductor.hpp"

using namespace hwec;

namespace {

TapeSpec tape() {
  TapeSpec t;
  t.name = "4mm";
  t.width_m = 4e-3;
  t.thickness_m = 2e-4;
  t.ic_ref_A = 215.0;
  t.reference_temperature_K = 20;
  t.critical_temperature_K = 92;
  return t;
}

}  // namespace

TEST_CASE("linear temperature scaling of Ic") {
  const TapeSpec t = tape();
  const LiftModel one = LiftModel::unity();
  CHECK(test::rel(ic_local(t, one, {}, 20.0), 215.0) < 1e-12);
  CHECK(test::rel(ic_local(t, one, {}, 56.0), 107.5) < 1e-12);
  CHECK(ic_local(t, one, {}, 92.0) == 0.0);
  CHECK_THROWS_AS(ic_local(t, one, {}, 19.0), DomainError);
  CHECK_THROWS_AS(ic_local(t, one, {}, 93.0), DomainError);
}

TEST_CASE("current sharing temperature inverts the Ic(T) line") {
  CHECK(current_sharing_temperature(179, 215, 20, 92) == doctest::Approx(32.0558).epsilon(1e-5));
  CHECK(current_sharing_temperature(215, 215, 20, 92) == doctest::Approx(20.0));
  CHECK_THROWS_AS(current_sharing_temperature(300, 215, 20, 92), DomainError);
  const auto line = ic_temperature_curve(215, 20, 92, 5);
  CHECK(line.front().ic_A == 215.0);
  CHECK(line.back().ic_A == 0.0);
}

TEST_CASE("current margin") {
  const CurrentMargin m = current_margin(179, 215);
  CHECK(m.margin_A == doctest::Approx(36.0));
  CHECK(m.percent == doctest::Approx(100.0 * 36 / 179));
  CHECK_THROWS_AS(current_margin(215, 215), NegativeMarginError);
  CHECK_THROWS_AS(current_margin(250, 215), NegativeMarginError);
}

TEST_CASE("Kim lift factor") {
  const LiftModel kim = LiftModel::kim_model(0.5, 0.2, 0.8);
  CHECK(kim({0.0, 0.0}) == 1.0);
  const FieldVector b{0.3, 0.4};
  const double expected = std::pow(1.0 + std::sqrt(0.25 * 0.16 + 0.09) / 0.2, -0.8);
  CHECK(kim(b) == doctest::Approx(expected).epsilon(1e-14));
  // Only the magnitudes enter.
  CHECK(kim({-0.3, -0.4}) == kim(b));
  CHECK_THROWS_AS(LiftModel::kim_model(0.5, 0.0, 0.8), ValidationError);
}

TEST_CASE("tabulated lift interpolates bilinearly and clamps") {
  const LiftModel t = LiftModel::tabulated({0, 1, 2}, {0, 2}, {1.0, 0.8, 0.6, 0.5, 0.4, 0.3});
  CHECK(t({0.0, 0.0}) == 1.0);
  CHECK(t({0.5, 1.0}) == doctest::Approx(0.5 * (0.9 + 0.55)));
  CHECK(t({5.0, 9.0}) == doctest::Approx(0.3));
  CHECK_THROWS_AS(LiftModel::tabulated({0, 1}, {0, 1}, {1, 1.2, 0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(LiftModel::tabulated({0.1, 1}, {0, 1}, {1, 1, 1, 1}), ValidationError);
}

TEST_CASE("unit lift gives the smallest reference Ic as the magnet Ic") {
  MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto r = magnet_critical_current(f, LiftModel::unity(), 20.0, 179.0);
  CHECK(r.critical_current_A == doctest::Approx(1050.0985).epsilon(1e-9));
  CHECK(f.tape(r.limiting_index).name == "4mm");
}

TEST_CASE("load line fixed point") {
  MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto r = magnet_critical_current(f, m.lift, 20.0, 179.0, {1e-6, 200});
  const double g = min_turn_critical_current(f, m.lift, r.critical_current_A, 20.0).first;
  CHECK(std::abs(g - r.critical_current_A) < 1e-3);
  CHECK(r.margin_A == doctest::Approx(r.critical_current_A - 179.0));
  // Limiting turn carries the smallest Ic among all turns.
  const auto all = turn_critical_currents(f, m.lift, r.critical_current_A, 20.0);
  CHECK(all[r.limiting_index] == *std::min_element(all.begin(), all.end()));
}

TEST_CASE("load line curve falls with current") {
  MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto c = load_line_curve(f, m.lift, 20.0, 500.0, 11);
  REQUIRE(c.size() == 11);
  CHECK(c.front().current_A == 0.0);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].min_ic_A <= c[i - 1].min_ic_A);
}

TEST_CASE("negative margin is reported, not thrown") {
  MachineConfig m = test::small_machine();
  const WindingField f(m.assembly, m.iron_boost_factor, m.numerics.field);
  const auto r = magnet_critical_current(f, m.lift, 20.0, 5000.0);
  CHECK(r.margin_A < 0.0);
}
