// Named scenarios, one per published data set (fig4a ... fig16) plus the scans.
#pragma once

#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace ionchaos::app {

struct Preset {
  std::string name;
  std::string description;
  std::string yaml;  // config tree, same grammar as a config file
};

const std::vector<Preset>& presets();

/// nullptr when unknown.
const Preset* find_preset(const std::string& name);

/// If the tree names a preset, return the preset tree with `tree` merged on
/// top; otherwise return tree unchanged.  Throws ConfigError for unknown names.
YAML::Node expand_preset(const YAML::Node& tree, const std::string& source);

/// Tree for a bare preset name.
YAML::Node preset_tree(const std::string& name);

}  // namespace ionchaos::app
