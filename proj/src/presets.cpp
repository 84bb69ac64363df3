#include "ionchaos/app/presets.hpp"

#include "ionchaos/app/config.hpp"

namespace ionchaos::app {

namespace {

// Seven initial conditions on the xi axis for the Poincare sections.
constexpr const char* fan = "initial: {points: [[0, 0], [0.5, 0], [1, 0], [1.5, 0], [2, 0], [2.5, 0], [3, 0]]}\n";

std::string model(const std::string& epsilons) {
  std::string m = "model: {";
  if (!epsilons.empty()) m += "epsilon: [" + epsilons + "], ";
  return m + "eta: 0.45, N: 4, delta: 0.01}\n";
}

std::vector<Preset> build() {
  std::vector<Preset> p;
  auto add = [&](std::string name, std::string description, const std::string& epsilons,
                 std::string body) {
    p.push_back({name, std::move(description), "name: " + name + "\n" + model(epsilons) + body});
  };
  add("fig4a", "Poincare sections, regular regime, seven initial conditions",
      "2, 2.5, 3, 4",
      "kind: poincare\n" + std::string(fan) +
          "poincare: {periods: 500, phase: 0}\n");
  add("fig4b", "Poincare sections, chaotic regime, seven initial conditions",
      "5, 8, 10, 20",
      "kind: poincare\n" + std::string(fan) +
          "poincare: {periods: 500, phase: 0}\n");
  add("fig5", "xi(tau) from the classical ground state, tau in [0, 100]",
      "0, 0.5, 1, 2, 5, 8",
      "kind: classical-trajectory\n"
      "initial: {points: [[0, 0]]}\ntime: {tau_end: 100, dtau: 0.1}\n");
  add("fig6", "xi(tau) in the chaotic regime, tau in [0, 100]",
      "10, 20, 30, 40",
      "kind: classical-trajectory\n"
      "initial: {points: [[0, 0]]}\ntime: {tau_end: 100, dtau: 0.1}\n");
  add("fig7", "spectrum of xi(tau), regular regime",
      "0, 0.5, 1, 2, 5, 8",
      "kind: classical-spectrum\n"
      "initial: {points: [[0, 0]]}\ntime: {tau_end: 100, dtau: 0.1}\nspectrum: {signal: xi, window: hann}\n");
  add("fig8", "spectrum of xi(tau), chaotic regime",
      "10, 20, 30, 40",
      "kind: classical-spectrum\n"
      "initial: {points: [[0, 0]]}\ntime: {tau_end: 100, dtau: 0.1}\nspectrum: {signal: xi, window: hann}\n");
  add("fig9", "P_0..P_5 from the ground state, small epsilon",
      "0, 0.5, 1, 1.5, 2",
      "kind: quantum-probabilities\n"
      "initial: {fock: 0}\ntime: {tau_end: 15, dtau: 0.01}\nquantum: {nmax: 200, levels: 5}\n");
  add("fig10", "P_0..P_3 from the ground state, larger epsilon",
      "3, 5, 7.5",
      "kind: quantum-probabilities\n"
      "initial: {fock: 0}\ntime: {tau_end: 15, dtau: 0.01}\nquantum: {nmax: 200, levels: 3}\n");
  add("fig11", "P_0 over tau in [0, 30]",
      "1, 5, 7.5, 8",
      "kind: quantum-probabilities\n"
      "initial: {fock: 0}\ntime: {tau_end: 30, dtau: 0.01}\nquantum: {nmax: 200, levels: 0}\n");
  add("fig12", "spectrum of P_0(tau), tau in [0, 30]",
      "1, 5, 7.5, 8",
      "kind: quantum-spectrum\n"
      "initial: {fock: 0}\ntime: {tau_end: 30, dtau: 0.01}\nquantum: {nmax: 200}\n"
      "spectrum: {signal: p0, window: hann}\n");
  add("fig13", "<xi^2>(tau), tau in [0, 30]",
      "3, 5, 7.5, 8",
      "kind: expectation-values\n"
      "initial: {fock: 0}\ntime: {tau_end: 30, dtau: 0.01}\nquantum: {nmax: 200, levels: 0}\n");
  add("fig14", "spectrum of <xi^2>(tau), tau in [0, 30]",
      "1, 5, 7.5, 8",
      "kind: quantum-spectrum\n"
      "initial: {fock: 0}\ntime: {tau_end: 30, dtau: 0.01}\nquantum: {nmax: 200}\n"
      "spectrum: {signal: xi2, window: hann}\n");
  add("fig15", "<H_LO> and <xi^2>, regular regime, tau in [0, 15]",
      "0, 0.5, 2",
      "kind: expectation-values\n"
      "initial: {fock: 0}\ntime: {tau_end: 15, dtau: 0.01}\nquantum: {nmax: 200, levels: 0}\n");
  add("fig16", "<H_LO> and <xi^2>, larger epsilon, tau in [0, 15]",
      "3, 5, 7.5, 8",
      "kind: expectation-values\n"
      "initial: {fock: 0}\ntime: {tau_end: 15, dtau: 0.01}\nquantum: {nmax: 200, levels: 0}\n");
  add("chaos-scan", "Lyapunov exponent and spectral entropy over epsilon in [0, 20]",
      "",
      "kind: chaos-scan\ninitial: {points: [[0, 0]]}\n"
      "scan: {epsilon_min: 0, epsilon_max: 20, epsilon_step: 0.5, tau_lyapunov: 2000,"
      " tau_spectrum: 100, dtau_spectrum: 0.1}\n");
  add("chaos-scan-fig5", "chaos indicators on the fig5 epsilon grid",
      "0, 0.5, 1, 2, 5, 8",
      "kind: chaos-scan\ninitial: {points: [[0, 0]]}\n"
      "scan: {tau_lyapunov: 2000, tau_spectrum: 100, dtau_spectrum: 0.1}\n");
  p.push_back({"raman-check", "Lambda tensors against the 3-j sums, as JSON",
               "name: raman-check\nkind: raman-check\noutput: {format: json}\n"});
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

YAML::Node preset_tree(const std::string& name) {
  const Preset* p = find_preset(name);
  if (!p) throw ConfigError("preset", 0, 0, "unknown preset '" + name + "'");
  return parse_tree(p->yaml, "preset " + name);
}

YAML::Node expand_preset(const YAML::Node& tree, const std::string& source) {
  const YAML::Node ref = tree["preset"];
  if (!ref) return YAML::Clone(tree);
  if (!ref.IsScalar()) throw ConfigError(source, ref.Mark(), "'preset' must be a name");
  const Preset* p = find_preset(ref.Scalar());
  if (!p) throw ConfigError(source, ref.Mark(), "unknown preset '" + ref.Scalar() + "'");
  YAML::Node merged = merge_trees(parse_tree(p->yaml, "preset " + p->name), tree);
  merged.remove("preset");
  return merged;
}

}  // namespace ionchaos::app
