/*
 * config.hpp - scenario configuration
 *
 * A configuration is a tree of maps, lists and scalars read from YAML (JSON
 * is accepted as-is).  It is layered: preset, then file, then --set overrides,
 * and resolved into a Scenario whose every field is explicit.  See
 * docs/config.md for the keys.
 */
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "ionchaos/classical.hpp"
#include "ionchaos/lyapunov.hpp"
#include "ionchaos/params.hpp"
#include "ionchaos/quantum.hpp"
#include "ionchaos/spectral.hpp"

namespace ionchaos::app {

/// Bad configuration.  line/column are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& msg);
  ConfigError(const std::string& source, const YAML::Mark& mark, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0, column_ = 0;
};

enum class Kind {
  classical_trajectory,
  poincare,
  classical_spectrum,
  quantum_probabilities,
  quantum_spectrum,
  expectation_values,
  chaos_scan,
  raman_check,
};

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);  // throws std::invalid_argument

enum class Signal { xi, p0, xi2 };
enum class OutputFormat { csv, json };

struct Scenario {
  std::string name = "custom";
  Kind kind = Kind::classical_trajectory;

  // model; epsilons is the list of runs
  std::vector<double> epsilons{2.0};
  double eta = 0.45;
  int N = 4;
  double delta = 0.01;
  std::optional<PhysicalConfig> physical;  // when set, the model was derived from it

  double tau_end = 100.0;
  double dtau = 0.1;

  std::vector<classical::ClassicalState> initial{{0.0, 0.0, 0.0}};
  ode::Tolerances tol;  // classical integration

  int poincare_periods = 500;
  double poincare_phase = 0.0;

  int nmax = 200;
  int levels = 5;  // P_0..P_levels in state-history output
  int fock = 0;    // initial Fock state
  quantum::PropagateOptions quantum;

  Signal signal = Signal::xi;
  spectral::Window window = spectral::Window::hann;

  // chaos scan
  double tau_lyapunov = 2000.0;
  double tau_spectrum = 100.0;
  double dtau_spectrum = 0.1;
  classical::LyapunovOptions lyapunov;

  OutputFormat format = OutputFormat::csv;

  DimensionlessParams params(double epsilon) const;
};

/// Parse YAML/JSON text.  `source` names the origin in error messages.
YAML::Node parse_tree(const std::string& text, const std::string& source);
YAML::Node load_tree_file(const std::string& path);

/// Deep merge: maps merge key by key, anything else in `over` replaces.
YAML::Node merge_trees(const YAML::Node& base, const YAML::Node& over);

/// Apply "a.b.c=value"; the value is parsed as YAML (so lists work).
void apply_override(YAML::Node& tree, const std::string& assignment);

/// Validate and resolve.  Unknown keys and ill-typed values are errors.
Scenario resolve(const YAML::Node& tree, const std::string& source);

/// Fully explicit form of a scenario; resolving its dump reproduces s exactly.
nlohmann::json to_json(const Scenario& s);

}  // namespace ionchaos::app
