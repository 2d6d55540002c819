#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "hwec/errors.hpp"
#include "hwec/optimizer.hpp"

using namespace hwec;

TEST_CASE("template height and width reproduce the template") {
  const MachineConfig m = test::small_machine();
  const WindingPack& pack = m.assembly.packs.front().pack;
  const MachineConfig c = sweep_candidate(m, pack.total_height_m(), pack.total_width_m(), {});
  const WindingPack& built = c.assembly.packs.front().pack;
  REQUIRE(built.pancakes.size() == pack.pancakes.size());
  for (std::size_t i = 0; i < pack.pancakes.size(); ++i) {
    CHECK(built.pancakes[i].turns_per_pancake == pack.pancakes[i].turns_per_pancake);
    CHECK(built.pancakes[i].inner_radius_m == doctest::Approx(0.0716).epsilon(1e-12));
    CHECK(built.pancakes[i].axial_center_m ==
          doctest::Approx(pack.pancakes[i].axial_center_m).epsilon(1e-12));
  }
  CHECK(c.assembly.cryostat_height_m == doctest::Approx(m.assembly.cryostat_height_m).epsilon(1e-12));
}

TEST_CASE("candidates keep the tape length of every width class") {
  const MachineConfig m = test::small_machine();
  const auto lengths = tape_length_of(m.assembly);
  for (double h : {0.032, 0.035, 0.04}) {
    for (double w : {0.004, 0.0047, 0.006}) {
      const MachineConfig c = sweep_candidate(m, h, w, {});
      const auto built = tape_length_of(c.assembly);
      for (const auto& [name, len] : lengths) CHECK(built.at(name) == doctest::Approx(len).epsilon(1e-12));
      CHECK(c.assembly.packs.front().pack.total_height_m() == doctest::Approx(h).epsilon(1e-12));
    }
  }
}

TEST_CASE("candidate validation") {
  const MachineConfig m = test::small_machine();
  // Three double pancakes of 12, 8 and 12 mm tape need 32 mm.
  CHECK_THROWS_AS(sweep_candidate(m, 0.031, 0.0047, {}), ValidationError);
  CHECK_NOTHROW(sweep_candidate(m, 0.032, 0.0047, {}));
  CHECK_THROWS_AS(sweep_candidate(m, 0.04, 0.5, {}), ValidationError);
  CHECK_THROWS_AS(sweep_candidate(m, -1.0, 0.005, {}), ValidationError);
}

TEST_CASE("sweep spec grid and validation") {
  SweepSpec s;
  s.height_min_mm = s.height_max_mm = 126.0;
  s.width_min_mm = 20.0;
  s.width_max_mm = 24.0;
  s.width_step_mm = 2.0;
  CHECK(s.heights_mm() == std::vector<double>{126.0});
  CHECK(s.widths_mm() == std::vector<double>{20.0, 22.0, 24.0});
  CHECK_NOTHROW(s.validate());
  s.max_evaluations = 2;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.max_evaluations = 400;
  s.width_max_mm = 19.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);

  const SweepSpec p = parse_sweep_spec(
      "[sweep]\nheight_min_mm = 120\nheight_max_mm = 130\nheight_step_mm = 5\n"
      "width_min_mm = 22.4\nwidth_max_mm = 22.4\nobjective = \"emf_rms\"\n"
      "[sweep.tape_length_km]\n4mm = 1.5\n");
  CHECK(p.heights_mm().size() == 3);
  CHECK(p.objective == SweepObjective::emf_rms);
  CHECK(p.tape_length_km.at("4mm") == 1.5);
  CHECK_THROWS_AS(parse_sweep_spec("[sweep]\nheight_min = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_sweep_spec("[grid]\n"), ValidationError);
  CHECK_THROWS_AS(sweep_objective_from_string("mass"), ValidationError);
}

TEST_CASE("one-point sweep on the small machine") {
  const MachineConfig m = test::small_machine();
  const WindingPack& pack = m.assembly.packs.front().pack;
  SweepSpec s;
  s.height_min_mm = s.height_max_mm = pack.total_height_m() * 1e3;
  s.width_min_mm = s.width_max_mm = pack.total_width_m() * 1e3;
  s.width_max_mm += 60.0;
  s.width_step_mm = 60.0;
  s.objective = SweepObjective::emf_rms;
  s.top_k = 1;
  const SweepReport r = sweep(s, m, 2);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].feasible);
  CHECK(r.rows[0].tape_length_error < 1e-12);
  CHECK(r.rows[0].critical_current_A > 0.0);
  CHECK(r.rows[0].emf_rms_V > 0.0);
  // Too short a tape for the wider build.
  CHECK_FALSE(r.rows[1].feasible);
  CHECK_FALSE(r.rows[1].reason.empty());
  REQUIRE(r.argmax());
  CHECK(*r.argmax() == 0);
  CHECK(r.rows[0].power_out_W.has_value());
  std::ostringstream os;
  write_sweep_csv(os, r);
  CHECK(os.str().find('\n') != std::string::npos);
}

TEST_CASE("identical designs compare equal") {
  const MachineConfig m = test::small_machine();
  const WidthComparison c = compare_multi_width(m, m);
  CHECK(c.delta_ic_percent == doctest::Approx(0.0));
  CHECK(c.delta_power_percent == doctest::Approx(0.0).scale(1.0));
  CHECK(c.single_current_A == doctest::Approx(c.multi_current_A));
}
