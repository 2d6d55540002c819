#include <doctest.h>

#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "hwec/config.hpp"
#include "hwec/errors.hpp"

using namespace hwec;

namespace {

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("config round trip") {
  const MachineConfig ref = build_reference_design();
  CHECK(parse_config(to_toml(ref)) == ref);
  const MachineConfig small = test::small_machine();
  CHECK(parse_config(to_toml(small)) == small);
}

TEST_CASE("shipped reference config matches the built-in design") {
  const std::filesystem::path path = std::filesystem::path(HWEC_SOURCE_DIR) / "configs/reference.toml";
  MachineConfig loaded = load_config(path);
  CHECK(std::filesystem::equivalent(loaded.cryo.data_dir, std::filesystem::path(HWEC_SOURCE_DIR) / "data"));
  loaded.cryo.data_dir.clear();
  CHECK(loaded == build_reference_design());
}

TEST_CASE("config errors") {
  const std::string text = to_toml(build_reference_design());
  CHECK_THROWS_AS(parse_config(replace_once(text, "[machine]\n", "[machine]\nbogus = 1\n")),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(replace_once(text, "tape = \"4mm\"", "tape = \"5mm\"")),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(replace_once(text, "[machine]\n", "[machine\n")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace_once(text, "model = \"kim\"", "model = \"linear\"")),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(replace_once(text, "time_step_s = ", "time_step_s = -")),
                  ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/hwec.toml"), ValidationError);
}

TEST_CASE("integers are accepted for real-valued keys") {
  const std::string text = to_toml(build_reference_design());
  const MachineConfig m = parse_config(replace_once(text, "amplitude_m = 1.25", "amplitude_m = 2"));
  CHECK(m.wave.amplitude_m == 2.0);
}

TEST_CASE("tabulated lift round trip") {
  MachineConfig m = build_reference_design();
  m.lift = LiftModel::tabulated({0.0, 0.5, 1.0}, {0.0, 2.0}, {1.0, 0.9, 0.6, 0.5, 0.4, 0.3});
  CHECK(parse_config(to_toml(m)) == m);
}
