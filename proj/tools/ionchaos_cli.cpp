// ionchaos command-line front end.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionchaos/app/config.hpp"
#include "ionchaos/app/manifest.hpp"
#include "ionchaos/app/presets.hpp"
#include "ionchaos/app/scenario.hpp"

namespace fs = std::filesystem;
using namespace ionchaos::app;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct Common {
  std::string out;
  int workers = 1;
  std::vector<std::string> overrides;
  std::string format;
};

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("IONCHAOS_OUT"); env && *env) return env;
  return "ionchaos-out";
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--out", c.out, "output directory (default $IONCHAOS_OUT or ./ionchaos-out)");
  cmd->add_option("-j,--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.overrides, "override a config value, e.g. model.epsilon=[1,2]")
      ->take_all()
      ->allow_extra_args(false);
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

// Loads a preset name, a config file or a manifest into a configuration tree.
// `manifest` receives the parsed manifest when the target is one.
YAML::Node load_target(const std::string& target, std::string& source, nlohmann::json& manifest) {
  if (find_preset(target)) {
    source = "preset " + target;
    return preset_tree(target);
  }
  if (!fs::exists(target)) throw ConfigError(target, 0, 0, "no such preset or file");
  source = target;
  if (fs::path(target).extension() == ".json") {
    std::ifstream is(target);
    const auto j = nlohmann::json::parse(is, nullptr, false);
    if (!j.is_discarded() && looks_like_manifest(j)) {
      manifest = j;
      return parse_tree(j["scenario"].dump(), target + " (scenario)");
    }
  }
  return expand_preset(load_tree_file(target), target);
}

int execute(YAML::Node tree, const std::string& source, const Common& c, const nlohmann::json& manifest) {
  for (const auto& o : c.overrides) apply_override(tree, o);
  if (!c.format.empty()) apply_override(tree, "output.format=" + c.format);
  const Scenario s = resolve(tree, source);
  const fs::path dir = out_dir(c);
  const RunReport report = run_scenario(s, dir, c.workers);
  for (const auto& f : report.files) std::cout << (dir / f.name).string() << "\n";
  std::cout << (dir / manifest_name).string() << "\n";
  int code = exit_ok;
  for (const auto& f : report.failures) {
    std::cerr << "error: " << f << "\n";
    code = exit_numeric;
  }
  if (!manifest.is_null()) {
    const auto bad = checksum_mismatches(manifest, report.files);
    for (const auto& name : bad) std::cerr << "checksum mismatch: " << name << "\n";
    if (!bad.empty()) code = exit_numeric;
    else std::cerr << "all " << report.files.size() << " checksums match\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raman-driven trapped-ion chaos: classical and quantum simulations"};
  app.set_version_flag("--version", "ionchaos " + tool_version());
  app.require_subcommand(1);

  Common run_opts;
  std::string target;
  auto* run = app.add_subcommand("run", "run a preset, a config file (YAML/JSON) or a manifest");
  run->add_option("target", target, "preset name, config path or manifest.json")->required();
  add_common(run, run_opts);

  Common sweep_opts;
  std::string sweep_target = "chaos-scan";
  auto* sweep = app.add_subcommand("sweep", "Lyapunov exponent and spectral entropy over an epsilon grid");
  sweep->add_option("target", sweep_target, "chaos-scan preset or config (default chaos-scan)");
  add_common(sweep, sweep_opts);

  std::string raman_out;
  auto* raman = app.add_subcommand("raman-check", "print the Lambda tensor check as JSON");
  raman->add_option("-o,--out", raman_out, "also write the report to this file");

  auto* list = app.add_subcommand("list-presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*list) {
      for (const auto& p : presets()) std::cout << p.name << "\t" << p.description << "\n";
      return exit_ok;
    }
    if (*raman) {
      const auto report = raman_report();
      const std::string text = report.dump(2) + "\n";
      std::cout << text;
      if (!raman_out.empty()) {
        std::ofstream os(raman_out);
        if (!(os << text)) throw std::runtime_error("cannot write " + raman_out);
      }
      return report["pass"].get<bool>() ? exit_ok : exit_numeric;
    }
    const bool is_sweep = bool(*sweep);
    const Common& c = is_sweep ? sweep_opts : run_opts;
    std::string source;
    nlohmann::json manifest;
    YAML::Node tree = load_target(is_sweep ? sweep_target : target, source, manifest);
    if (is_sweep) {
      const YAML::Node kind = tree["kind"];
      if (!kind || kind.Scalar() != "chaos-scan")
        throw ConfigError(source, 0, 0, "sweep needs a chaos-scan scenario");
    }
    return execute(tree, source, c, manifest);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
}
