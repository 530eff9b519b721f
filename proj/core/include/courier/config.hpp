#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "courier/params.hpp"

namespace courier {

/// A parsed configuration file: model parameters (defaults overlaid with the
/// file's values), optional custom scenarios and an optional city dataset.
struct Config {
  ModelParams params = ModelParams::defaults();
  std::map<std::string, Scenario> scenarios;
  std::optional<std::filesystem::path> city_path;
};

/// Parses a JSON configuration. Unknown keys, wrong types and invalid values
/// throw Error(config_error) naming the key path; syntax errors report the
/// line and column.
Config load_config(std::string_view json_text);
/// Relative city paths are resolved against the file's directory.
Config load_config_file(const std::filesystem::path& path);

/// The complete default configuration in the file format.
std::string default_config_json();

/// Looks up a scenario defined in the config, then the built-in presets.
/// Throws Error(config_error) for unknown names.
Scenario resolve_scenario(const Config& config, std::string_view name);

struct ConfigKeyDoc {
  std::string key;
  std::string default_value;
  std::string description;
};

/// Calibration keys that shape the study tables, for --help output.
std::vector<ConfigKeyDoc> config_key_docs();

}  // namespace courier
