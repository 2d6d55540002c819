#pragma once

// TOML reading and writing of MachineConfig. The schema is documented in
// docs/config.md; unknown keys are rejected so typos surface early.

#include <filesystem>
#include <string>
#include <string_view>

#include "hwec/machine.hpp"

namespace hwec {

/// Parses and validates a config. Relative paths inside it resolve against
/// `base_dir`. Throws ValidationError with the offending key on failure.
MachineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

MachineConfig load_config(const std::filesystem::path& path);

/// Serialises a config so that parse_config(to_toml(c)) reproduces it.
std::string to_toml(const MachineConfig& config);

}  // namespace hwec
