#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hwec/cli.hpp"
#include "hwec/config.hpp"
#include "hwec/io.hpp"

using namespace hwec;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result hwec_run(std::vector<std::string> args) {
  args.insert(args.begin(), "hwec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hwec_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path small_config(const fs::path& dir) {
  const fs::path p = dir / "small.toml";
  io::write_file(p, to_toml(test::small_machine()));
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2 and a JSON diagnostic") {
  CHECK(hwec_run({"--help"}).code == cli::kOk);
  CHECK(hwec_run({}).code == cli::kValidation);
  CHECK(hwec_run({"frobnicate"}).code == cli::kValidation);
  const Result missing = hwec_run({"stress", "--config", "/nonexistent/x.toml"});
  CHECK(missing.code == cli::kValidation);
  const auto line = missing.err.substr(0, missing.err.find('\n'));
  const auto j = nlohmann::json::parse(line);
  CHECK(j["level"] == "error");
  CHECK(j["exit_code"] == 2);
  CHECK(j["command"] == "stress");

  const fs::path dir = scratch("usage");
  const fs::path cfg = small_config(dir);
  CHECK(hwec_run({"simulate", "--config", cfg.string(), "--cycles", "0", "--out", (dir / "o").string()}).code ==
        cli::kValidation);
  CHECK(hwec_run({"stress", "--config", cfg.string(), "--model", "plastic", "--out", (dir / "o").string()})
            .code == cli::kValidation);
  io::write_file(dir / "empty.toml",
                 "[sweep]\nheight_min_mm = 50\nheight_max_mm = 40\nwidth_min_mm = 4\nwidth_max_mm = 5\n");
  CHECK(hwec_run({"sweep", "--config", cfg.string(), "--sweep-spec", (dir / "empty.toml").string(), "--out",
                  (dir / "o").string()})
            .code == cli::kValidation);
}

TEST_CASE("infeasible sweep exits with 3") {
  const fs::path dir = scratch("infeasible");
  const fs::path cfg = small_config(dir);
  io::write_file(dir / "spec.toml",
                 "[sweep]\nheight_min_mm = 10\nheight_max_mm = 20\nheight_step_mm = 10\n"
                 "width_min_mm = 4\nwidth_max_mm = 4\n");
  const Result r = hwec_run({"sweep", "--config", cfg.string(), "--sweep-spec", (dir / "spec.toml").string(),
                             "--out", (dir / "o").string()});
  CHECK(r.code == cli::kSolver);
}

TEST_CASE("stress command writes its files and a manifest, reproducibly") {
  const fs::path dir = scratch("stress");
  const fs::path cfg = small_config(dir);
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  for (const char* sub : {"a", "b"}) {
    const Result r = hwec_run({"stress", "--config", cfg.string(), "--current", "150", "--out",
                               (dir / sub).string()});
    REQUIRE(r.code == cli::kOk);
  }
  ::unsetenv("SOURCE_DATE_EPOCH");
  for (const char* f : {"stress.csv", "stress.json", "manifest.json"}) CHECK(fs::exists(dir / "a" / f));
  CHECK(io::read_file(dir / "a/stress.csv") == io::read_file(dir / "b/stress.csv"));
  CHECK(io::read_file(dir / "a/stress.json") == io::read_file(dir / "b/stress.json"));
  const auto m = nlohmann::json::parse(io::read_file(dir / "a/manifest.json"));
  CHECK(m["command"] == "stress");
  CHECK(m["timestamp"] == "2023-11-14T22:13:20Z");
  CHECK(m["config_hash"] == io::fnv1a_hex(io::read_file(cfg)));
  CHECK(m["files"] == nlohmann::json::array({"manifest.json", "stress.csv", "stress.json"}));
}

TEST_CASE("output directory precedence") {
  ::unsetenv("HWEC_OUTPUT_DIR");
  CHECK(cli::output_directory("", "cryo") == fs::path("hwec-out") / "cryo");
  ::setenv("HWEC_OUTPUT_DIR", "/tmp/env-out", 1);
  CHECK(cli::output_directory("", "cryo") == fs::path("/tmp/env-out"));
  CHECK(cli::output_directory("/tmp/flag", "cryo") == fs::path("/tmp/flag"));
  ::unsetenv("HWEC_OUTPUT_DIR");
}

TEST_CASE("manifest JSON") {
  cli::RunManifest m;
  m.command = "cryo";
  m.files = {"cryo.json", "manifest.json"};
  const auto j = nlohmann::json::parse(cli::manifest_json(m));
  CHECK(j["command"] == "cryo");
  CHECK(j["files"].size() == 2);
}
