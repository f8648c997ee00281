#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace geoperc::cli {

/// A shipped experiment configuration; the JSON text is embedded from the
/// presets/ directory at build time.
struct Preset {
  std::string name;
  std::string json_text;
};

const std::vector<Preset>& builtin_presets();

/// Parsed and validated preset; ConfigError for unknown names.
ExperimentConfig preset_config(const std::string& name);

}  // namespace geoperc::cli
