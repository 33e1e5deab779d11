#pragma once

#include <string>
#include <vector>

#include "gcm/app/config.hpp"

namespace gcm::app {

enum class PresetKind { kSeries, kSweep, kPhase };

struct Preset {
  std::string name;
  PresetKind kind;
  std::string summary;
  RunConfig config;
};

/// All shipped presets, in a fixed order.
const std::vector<Preset>& presets();

/// Throws ConfigError (field "--preset") for unknown names.
const Preset& find_preset(const std::string& name);

/// Command that runs a preset kind: evolve, sweep or phase.
std::string command_for(PresetKind kind);

}  // namespace gcm::app
