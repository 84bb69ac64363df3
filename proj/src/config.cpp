#include "ionchaos/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ionchaos/scan.hpp"

namespace ionchaos::app {

namespace {

std::string format_location(const std::string& source, int line, int column) {
  std::string s = source;
  if (line > 0) s += ":" + std::to_string(line) + ":" + std::to_string(column);
  return s;
}

const std::map<std::string, Kind>& kind_names() {
  static const std::map<std::string, Kind> names{
      {"classical-trajectory", Kind::classical_trajectory},
      {"poincare", Kind::poincare},
      {"classical-spectrum", Kind::classical_spectrum},
      {"quantum-probabilities", Kind::quantum_probabilities},
      {"quantum-spectrum", Kind::quantum_spectrum},
      {"expectation-values", Kind::expectation_values},
      {"chaos-scan", Kind::chaos_scan},
      {"raman-check", Kind::raman_check},
  };
  return names;
}

/// One map of the tree; tracks which keys were consumed so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, const std::string& source)
      : node_(node), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsMap()) fail(node_, "expected a map");
  }

  bool has(const std::string& key) const { return node_ && node_[key]; }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  template <class T>
  void get(const std::string& key, T& out) {
    const YAML::Node n = raw(key);
    if (!n) return;
    out = scalar<T>(n, key);
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, "'" + name(key) + "' must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "'" + name(key) + "' has an invalid value '" + n.Scalar() + "'");
    }
  }

  std::vector<double> doubles(const std::string& key) {
    const YAML::Node n = raw(key);
    std::vector<double> out;
    if (!n) return out;
    if (n.IsScalar()) return {scalar<double>(n, key)};
    if (!n.IsSequence()) fail(n, "'" + name(key) + "' must be a number or a list of numbers");
    for (const auto& item : n) out.push_back(scalar<double>(item, key));
    return out;
  }

  Section child(const std::string& key) {
    return Section(raw(key), name(key), source_);
  }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) fail(kv.first, "unknown key '" + name(key) + "'");
    }
  }

  [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
    throw ConfigError(source_, n.Mark(), msg);
  }

  [[noreturn]] void fail_key(const std::string& key, const std::string& msg) const {
    const YAML::Node n = has(key) ? node_[key] : YAML::Node(YAML::NodeType::Undefined);
    throw ConfigError(source_, n ? n.Mark() : node_.Mark(), "'" + name(key) + "' " + msg);
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> used_;
};

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& msg)
    : std::runtime_error(format_location(source, line, column) + ": " + msg),
      line_(line),
      column_(column) {}

ConfigError::ConfigError(const std::string& source, const YAML::Mark& mark, const std::string& msg)
    : ConfigError(source, mark.is_null() ? 0 : mark.line + 1, mark.is_null() ? 0 : mark.column + 1,
                  msg) {}

std::string to_string(Kind k) {
  for (const auto& [name, kind] : kind_names())
    if (kind == k) return name;
  return "unknown";
}

Kind kind_from_string(const std::string& s) {
  const auto it = kind_names().find(s);
  if (it == kind_names().end()) throw std::invalid_argument("unknown scenario kind '" + s + "'");
  return it->second;
}

DimensionlessParams Scenario::params(double epsilon) const {
  return DimensionlessParams::from_detuning(epsilon, eta, N, delta);
}

YAML::Node parse_tree(const std::string& text, const std::string& source) {
  try {
    YAML::Node n = YAML::Load(text);
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!n.IsMap()) throw ConfigError(source, n.Mark(), "top level must be a map");
    return n;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark, e.msg);
  }
}

YAML::Node load_tree_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path, 0, 0, "cannot read file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_tree(ss.str(), path);
}

YAML::Node merge_trees(const YAML::Node& base, const YAML::Node& over) {
  if (!over) return YAML::Clone(base);
  if (!base || !base.IsMap() || !over.IsMap()) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    out[key] = merge_trees(base[key], kv.second);
  }
  return out;
}

namespace {

// Copy of `node` with keys[i..] set to value; yaml-cpp assignment aliases
// nodes, so the path is rebuilt from clones.
YAML::Node with_path(const YAML::Node& node, const std::vector<std::string>& keys, std::size_t i,
                     const YAML::Node& value, const std::string& source) {
  if (node && !node.IsNull() && !node.IsMap())
    throw ConfigError(source, 0, 0, "'" + keys[i - 1] + "' is not a section");
  YAML::Node out = node && node.IsMap() ? YAML::Clone(node) : YAML::Node(YAML::NodeType::Map);
  const YAML::Node current = node && node.IsMap() ? node[keys[i]] : YAML::Node(YAML::NodeType::Undefined);
  out[keys[i]] = i + 1 == keys.size() ? value : with_path(current, keys, i + 1, value, source);
  return out;
}

}  // namespace

void apply_override(YAML::Node& tree, const std::string& assignment) {
  const std::string source = "--set " + assignment;
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(source, 0, 0, "expected key=value");
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, 0, 0, "cannot parse value: " + e.msg);
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError(source, 0, 0, "empty key in dotted path");
    keys.push_back(k);
  }
  tree = with_path(tree, keys, 0, value, source);
}

Scenario resolve(const YAML::Node& tree, const std::string& source) {
  Scenario s;
  Section top(tree, "", source);
  top.get("name", s.name);
  top.raw("preset");  // consumed by the preset layer
  {
    std::string kind;
    top.get("kind", kind);
    if (kind.empty()) top.fail_key("kind", "is required");
    try {
      s.kind = kind_from_string(kind);
    } catch (const std::invalid_argument& e) {
      top.fail(tree["kind"], e.what());
    }
  }

  // model
  Section model = top.child("model");
  const bool physical = top.has("physical");
  if (physical) {
    Section ph = top.child("physical");
    PhysicalConfig cfg;
    ph.get("mass", cfg.mass);
    ph.get("trap_omega", cfg.trap_omega);
    ph.get("k0", cfg.k0);
    ph.get("einstein_A", cfg.einstein_A);
    ph.get("laser_power", cfg.laser_power);
    ph.get("spot_size", cfg.spot_size);
    ph.get("detuning", cfg.detuning);
    ph.get("theta", cfg.theta);
    ph.get("amplitude_ratio", cfg.amplitude_ratio);
    ph.get("drive_omega", cfg.drive_omega);
    ph.finish();
    for (const char* key : {"epsilon", "eta", "delta", "mu"})
      if (model.has(key)) model.fail_key(key, "cannot be combined with a physical section");
    std::optional<int> n_override;
    if (model.has("N")) {
      int n = 0;
      model.get("N", n);
      n_override = n;
    }
    try {
      const auto d = n_override ? derive_dimensionless(cfg, *n_override) : derive_dimensionless(cfg);
      s.epsilons = {d.epsilon()};
      s.eta = d.eta();
      s.N = d.N();
      s.delta = d.delta();
    } catch (const std::exception& e) {
      throw ConfigError(source, tree["physical"].Mark(), e.what());
    }
    s.physical = cfg;
  } else {
    if (model.has("epsilon")) s.epsilons = model.doubles("epsilon");
    model.get("eta", s.eta);
    model.get("N", s.N);
    if (model.has("delta") && model.has("mu")) model.fail_key("mu", "cannot be combined with delta");
    model.get("delta", s.delta);
    if (model.has("mu")) {
      double mu = 0.0;
      model.get("mu", mu);
      s.delta = s.N - mu;
    }
  }
  model.finish();

  Section time = top.child("time");
  time.get("tau_end", s.tau_end);
  time.get("dtau", s.dtau);
  time.finish();

  Section init = top.child("initial");
  if (init.has("points")) {
    const YAML::Node pts = init.raw("points");
    if (!pts.IsSequence() || pts.size() == 0) init.fail(pts, "'initial.points' must be a nonempty list of [xi, v] pairs");
    s.initial.clear();
    for (const auto& pt : pts) {
      if (!pt.IsSequence() || pt.size() != 2) init.fail(pt, "each initial point must be [xi, v]");
      s.initial.push_back({init.scalar<double>(pt[0], "points"), init.scalar<double>(pt[1], "points"), 0.0});
    }
  }
  init.get("fock", s.fock);
  init.finish();

  Section integ = top.child("integrator");
  integ.get("rtol", s.tol.rtol);
  integ.get("atol", s.tol.atol);
  integ.finish();

  Section pc = top.child("poincare");
  pc.get("periods", s.poincare_periods);
  pc.get("phase", s.poincare_phase);
  pc.finish();

  Section q = top.child("quantum");
  q.get("nmax", s.nmax);
  q.get("levels", s.levels);
  q.get("tail_tolerance", s.quantum.tail_tolerance);
  q.get("guard_band", s.quantum.guard_band);
  q.get("max_doublings", s.quantum.max_doublings);
  q.get("norm_abort", s.quantum.norm_abort);
  q.get("rtol", s.quantum.tol.rtol);
  q.get("atol", s.quantum.tol.atol);
  if (q.has("kernel")) {
    std::string k;
    q.get("kernel", k);
    if (k == "operator") s.quantum.convention = quantum::KernelConvention::operator_definition;
    else if (k == "printed") s.quantum.convention = quantum::KernelConvention::printed_kernel;
    else q.fail_key("kernel", "must be 'operator' or 'printed'");
  }
  q.finish();

  Section sp = top.child("spectrum");
  if (sp.has("signal")) {
    std::string v;
    sp.get("signal", v);
    if (v == "xi") s.signal = Signal::xi;
    else if (v == "p0") s.signal = Signal::p0;
    else if (v == "xi2") s.signal = Signal::xi2;
    else sp.fail_key("signal", "must be one of xi, p0, xi2");
  }
  if (sp.has("window")) {
    std::string v;
    sp.get("window", v);
    if (v == "hann") s.window = spectral::Window::hann;
    else if (v == "rectangular") s.window = spectral::Window::rectangular;
    else sp.fail_key("window", "must be 'hann' or 'rectangular'");
  }
  sp.finish();

  Section sc = top.child("scan");
  {
    const bool any = sc.has("epsilon_min") || sc.has("epsilon_max") || sc.has("epsilon_step");
    if (any) {
      double lo = 0.0, hi = 0.0, step = 0.0;
      for (const char* key : {"epsilon_min", "epsilon_max", "epsilon_step"})
        if (!sc.has(key)) sc.fail_key(key, "is required when an epsilon range is given");
      sc.get("epsilon_min", lo);
      sc.get("epsilon_max", hi);
      sc.get("epsilon_step", step);
      try {
        s.epsilons = scan::epsilon_range(lo, hi, step);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(source, tree["scan"].Mark(), e.what());
      }
    }
  }
  sc.get("tau_lyapunov", s.tau_lyapunov);
  sc.get("tau_spectrum", s.tau_spectrum);
  sc.get("dtau_spectrum", s.dtau_spectrum);
  sc.get("offset", s.lyapunov.offset);
  sc.get("renorm_interval", s.lyapunov.renorm_interval);
  sc.get("discard_fraction", s.lyapunov.discard_fraction);
  sc.get("max_separation", s.lyapunov.max_separation);
  sc.finish();
  s.lyapunov.tol = s.tol;

  Section out = top.child("output");
  if (out.has("format")) {
    std::string v;
    out.get("format", v);
    if (v == "csv") s.format = OutputFormat::csv;
    else if (v == "json") s.format = OutputFormat::json;
    else out.fail_key("format", "must be 'csv' or 'json'");
  }
  out.finish();
  top.finish();

  // cross-field validation
  auto bad = [&](const std::string& what) { throw ConfigError(source, tree.Mark(), what); };
  if (s.kind != Kind::raman_check) {
    if (s.epsilons.empty()) bad("model.epsilon must list at least one value");
    for (double e : s.epsilons)
      if (!(e >= 0.0) || !std::isfinite(e)) bad("model.epsilon values must be finite and >= 0");
    if (!(s.eta > 0.0)) bad("model.eta must be > 0");
    if (s.N < 1) bad("model.N must be >= 1");
    if (!std::isfinite(s.delta)) bad("model.delta must be finite");
    if (!(s.dtau > 0.0)) bad("time.dtau must be > 0");
    if (!(s.tau_end > 0.0)) bad("time.tau_end must be > 0");
    if (!(s.tol.rtol > 0.0 && s.tol.atol > 0.0)) bad("integrator tolerances must be > 0");
  }
  if (s.kind == Kind::chaos_scan && !std::is_sorted(s.epsilons.begin(), s.epsilons.end()))
    bad("chaos-scan epsilons must be sorted ascending");
  if (s.kind == Kind::poincare && s.poincare_periods < 1) bad("poincare.periods must be >= 1");
  if (s.nmax < 2) bad("quantum.nmax must be >= 2");
  if (s.fock < 0 || s.fock >= s.nmax) bad("initial.fock must lie in [0, nmax)");
  if (s.levels < 0 || s.levels >= s.nmax) bad("quantum.levels must lie in [0, nmax)");
  if (s.quantum.guard_band < 1 || s.quantum.max_doublings < 0) bad("invalid quantum guard settings");
  if (s.kind == Kind::chaos_scan &&
      !(s.tau_lyapunov > 0.0 && s.tau_spectrum > 0.0 && s.dtau_spectrum > 0.0))
    bad("scan times must be > 0");
  return s;
}

nlohmann::json to_json(const Scenario& s) {
  using nlohmann::json;
  json j;
  j["name"] = s.name;
  j["kind"] = to_string(s.kind);
  if (s.physical) {
    const auto& c = *s.physical;
    j["physical"] = {{"mass", c.mass},
                     {"trap_omega", c.trap_omega},
                     {"k0", c.k0},
                     {"einstein_A", c.einstein_A},
                     {"laser_power", c.laser_power},
                     {"spot_size", c.spot_size},
                     {"detuning", c.detuning},
                     {"theta", c.theta},
                     {"amplitude_ratio", c.amplitude_ratio},
                     {"drive_omega", c.drive_omega}};
    j["model"] = {{"N", s.N}};
  } else {
    j["model"] = {{"epsilon", s.epsilons}, {"eta", s.eta}, {"N", s.N}, {"delta", s.delta}};
  }
  j["time"] = {{"tau_end", s.tau_end}, {"dtau", s.dtau}};
  json pts = json::array();
  for (const auto& p : s.initial) pts.push_back({p.xi, p.v});
  j["initial"] = {{"points", pts}, {"fock", s.fock}};
  j["integrator"] = {{"rtol", s.tol.rtol}, {"atol", s.tol.atol}};
  j["poincare"] = {{"periods", s.poincare_periods}, {"phase", s.poincare_phase}};
  j["quantum"] = {{"nmax", s.nmax},
                  {"levels", s.levels},
                  {"tail_tolerance", s.quantum.tail_tolerance},
                  {"guard_band", s.quantum.guard_band},
                  {"max_doublings", s.quantum.max_doublings},
                  {"norm_abort", s.quantum.norm_abort},
                  {"rtol", s.quantum.tol.rtol},
                  {"atol", s.quantum.tol.atol},
                  {"kernel", s.quantum.convention == quantum::KernelConvention::operator_definition
                                 ? "operator"
                                 : "printed"}};
  static const char* signals[] = {"xi", "p0", "xi2"};
  j["spectrum"] = {{"signal", signals[static_cast<int>(s.signal)]},
                   {"window", s.window == spectral::Window::hann ? "hann" : "rectangular"}};
  j["scan"] = {{"tau_lyapunov", s.tau_lyapunov},
               {"tau_spectrum", s.tau_spectrum},
               {"dtau_spectrum", s.dtau_spectrum},
               {"offset", s.lyapunov.offset},
               {"renorm_interval", s.lyapunov.renorm_interval},
               {"discard_fraction", s.lyapunov.discard_fraction},
               {"max_separation", s.lyapunov.max_separation}};
  j["output"] = {{"format", s.format == OutputFormat::csv ? "csv" : "json"}};
  return j;
}

}  // namespace ionchaos::app
