#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "hwec/errors.hpp"
#include "hwec/magnetostatics.hpp"

using namespace hwec;

namespace {


// Midpoint-rule Biot-Savart sum over n straight segments of the loop.
FieldVector biot_savart(double a, double current, double r, double z, int n) {
  double bx = 0, bz = 0;
  const double dphi = 2 * std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    const double phi = (k + 0.5) * dphi;
    const double dlx = -a * std::sin(phi) * dphi, dly = a * std::cos(phi) * dphi;
    const double rx = r - a * std::cos(phi), ry = -a * std::sin(phi), rz = z;
    const double d3 = std::pow(rx * rx + ry * ry + rz * rz, 1.5);
    bx += (dly * rz) / d3;
    bz += (dlx * ry - dly * rx) / d3;
  }
  const double c = kMu0 * current / (4 * std::numbers::pi);
  return {c * bx, c * bz};
}

}  // namespace

TEST_CASE("loop field on the axis") {
  const double a = 0.08, I = 150;
  for (double z : {0.0, 0.01, -0.2, 1.5}) {
    const double exact = kMu0 * I * a * a / (2 * std::pow(a * a + z * z, 1.5));
    const FieldVector b = loop_field(a, I, {0.0, z});
    CHECK(test::rel(b.bz_T, exact) < 1e-9);
    CHECK(b.br_T == 0.0);
  }
}

TEST_CASE("loop field off the axis matches a Biot-Savart sum") {
  const double a = 0.0716;
  for (auto [r, z] : {std::pair{0.03, 0.02}, {0.09, -0.01}, {0.2, 0.3}, {0.0717, 0.0005}}) {
    const FieldVector b = loop_field(a, 1.0, {r, z});
    const FieldVector ref = biot_savart(a, 1.0, r, z, 20000);
    CHECK(test::rel(b.bz_T, ref.bz_T) < 1e-8);
    CHECK(test::rel(b.br_T, ref.br_T) < 1e-8);
  }
}

TEST_CASE("field is linear in current") {
  const RZPoint p{0.05, 0.03};
  const FieldVector one = loop_field(0.1, 1.0, p);
  const FieldVector many = loop_field(0.1, 179.0, p);
  CHECK(std::abs(many.bz_T - 179 * one.bz_T) <= 1e-12 * std::abs(many.bz_T));
  CHECK(std::abs(many.br_T - 179 * one.br_T) <= 1e-12 * std::abs(many.br_T));
}

TEST_CASE("mutual flux is reciprocal") {
  const double m12 = loop_flux(0.07, 1.0, {0.2, 0.05});
  const double m21 = loop_flux(0.2, 1.0, {0.07, -0.05});
  CHECK(test::rel(m12, m21) < 1e-12);
  // Small coaxial disc in the uniform centre field of a large loop.
  const double a = 1.0, b = 1e-3;
  CHECK(test::rel(loop_flux(a, 1.0, {b, 0.0}), kMu0 / (2 * a) * std::numbers::pi * b * b) < 1e-5);
}

TEST_CASE("evaluation on the filament is rejected") {
  CHECK_THROWS_AS(loop_field(0.1, 1.0, {0.1, 0.0}), SingularPointError);
}

TEST_CASE("far-field lumping stays close to exact summation") {
  const MachineConfig m = test::small_machine();
  const auto loops = turn_loops_of(m.assembly);
  FieldOptions exact = m.numerics.field;
  exact.far_field_ratio = 0.0;
  const FilamentSet lumped(loops, m.numerics.field);
  const FilamentSet direct(loops, exact);
  const FieldVector ref = direct.field_per_amp({0.0, m.assembly.packs[1].axial_position_m});
  const double scale = std::hypot(ref.br_T, ref.bz_T);
  for (const RZPoint p : {RZPoint{0.0, 0.0}, RZPoint{0.12, 0.1}, RZPoint{0.08, 0.4}}) {
    const FieldVector a = lumped.field_per_amp(p), b = direct.field_per_amp(p);
    CHECK(std::hypot(a.br_T - b.br_T, a.bz_T - b.bz_T) < 1e-5 * scale);
  }
}

TEST_CASE("assembly field is the superposition of its turns") {
  MachineConfig m = test::small_machine();
  FieldOptions opt;
  opt.subfilaments = 1;
  opt.far_field_ratio = 0.0;
  const RZPoint p{0.03, 0.11};
  FieldVector sum;
  for (const auto& l : turn_loops_of(m.assembly)) sum += loop_field(l.radius_m, l.sign, {p.r_m, p.z_m - l.z_m});
  const FieldVector b = assembly_field(m.assembly, 1.0, p, 1.0, opt);
  CHECK(std::abs(b.bz_T - sum.bz_T) < 1e-12 * std::abs(sum.bz_T) + 1e-15);
  CHECK(std::abs(b.br_T - sum.br_T) < 1e-12 * std::abs(sum.br_T) + 1e-15);
}

TEST_CASE("winding field follows the mirror symmetry of one magnet") {
  MachineConfig m = test::small_machine();
  m.assembly = alternating_assembly(m.assembly.packs.front().pack, 1, 0.3, 0, 0);
  const WindingField f(m.assembly, 1.0, m.numerics.field);
  const auto turns = f.turns();
  const auto b = f.per_amp();
  // Turns are sorted by (z, r); the mirror of turn i is turn n-1-i within a radius.
  for (std::size_t i = 0; i < turns.size(); ++i) {
    for (std::size_t j = 0; j < turns.size(); ++j) {
      if (std::abs(turns[j].z_m + turns[i].z_m) < 1e-12 && turns[j].radius_m == turns[i].radius_m) {
        CHECK(b[j].bz_T == doctest::Approx(b[i].bz_T).epsilon(1e-9));
        CHECK(b[j].br_T == doctest::Approx(-b[i].br_T).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("iron boost scales the winding field") {
  MachineConfig m = test::small_machine();
  const WindingField a(m.assembly, 1.0, m.numerics.field);
  const WindingField b(m.assembly, 1.25, m.numerics.field);
  CHECK(b.per_amp()[7].bz_T == doctest::Approx(1.25 * a.per_amp()[7].bz_T).epsilon(1e-14));
  const FieldMap map = a.at_current(100);
  CHECK(map.max_T >= map.mean_T);
  CHECK(map.samples.size() == a.turns().size());
}
