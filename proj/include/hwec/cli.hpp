#pragma once

// The hwec command-line front end. Exit codes: 0 success, 1 unexpected
// internal error, 2 invalid input (config, flags, missing files), 3 solver or
// analysis failure.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hwec::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kSolver = 3 };

/// Written as manifest.json into every output directory.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::string config_hash;
  std::string output_dir;
  std::string tool_version;
  /// UTC, ISO 8601. Taken from SOURCE_DATE_EPOCH when that is set.
  std::string timestamp;
  /// Files written by the run, sorted.
  std::vector<std::string> files;
};

std::string manifest_json(const RunManifest& manifest);

/// Output directory: --out, else $HWEC_OUTPUT_DIR, else hwec-out/<command>.
std::filesystem::path output_directory(const std::string& flag, const std::string& command);

/// Runs one command; diagnostics go to `err` as one JSON object per line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hwec::cli
