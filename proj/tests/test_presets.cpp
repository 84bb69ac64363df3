#include <doctest.h>

#include <map>

#include "ionchaos/app/config.hpp"
#include "ionchaos/app/presets.hpp"

using namespace ionchaos;
using namespace ionchaos::app;

namespace {

struct Expected {
  Kind kind;
  std::vector<double> epsilons;
  double tau_end;
  int levels;  // -1: not checked
};

Scenario load(const std::string& name) { return resolve(preset_tree(name), name); }

}  // namespace

TEST_CASE("preset contents") {
  const std::map<std::string, Expected> table{
      {"fig4a", {Kind::poincare, {2, 2.5, 3, 4}, 100, -1}},
      {"fig4b", {Kind::poincare, {5, 8, 10, 20}, 100, -1}},
      {"fig5", {Kind::classical_trajectory, {0, 0.5, 1, 2, 5, 8}, 100, -1}},
      {"fig6", {Kind::classical_trajectory, {10, 20, 30, 40}, 100, -1}},
      {"fig7", {Kind::classical_spectrum, {0, 0.5, 1, 2, 5, 8}, 100, -1}},
      {"fig8", {Kind::classical_spectrum, {10, 20, 30, 40}, 100, -1}},
      {"fig9", {Kind::quantum_probabilities, {0, 0.5, 1, 1.5, 2}, 15, 5}},
      {"fig10", {Kind::quantum_probabilities, {3, 5, 7.5}, 15, 3}},
      {"fig11", {Kind::quantum_probabilities, {1, 5, 7.5, 8}, 30, 0}},
      {"fig12", {Kind::quantum_spectrum, {1, 5, 7.5, 8}, 30, -1}},
      {"fig13", {Kind::expectation_values, {3, 5, 7.5, 8}, 30, -1}},
      {"fig14", {Kind::quantum_spectrum, {1, 5, 7.5, 8}, 30, -1}},
      {"fig15", {Kind::expectation_values, {0, 0.5, 2}, 15, -1}},
      {"fig16", {Kind::expectation_values, {3, 5, 7.5, 8}, 15, -1}},
  };
  for (const auto& [name, e] : table) {
    CAPTURE(name);
    const Scenario s = load(name);
    CHECK(s.name == name);
    CHECK(s.kind == e.kind);
    CHECK(s.epsilons == e.epsilons);
    CHECK(s.eta == 0.45);
    CHECK(s.N == 4);
    CHECK(s.delta == 0.01);
    CHECK(s.tau_end == e.tau_end);
    if (e.levels >= 0) CHECK(s.levels == e.levels);
    if (e.kind == Kind::classical_trajectory || e.kind == Kind::classical_spectrum) {
      REQUIRE(s.initial.size() == 1);
      CHECK(s.initial[0].xi == 0.0);
      CHECK(s.initial[0].v == 0.0);
    }
    if (e.kind == Kind::quantum_probabilities || e.kind == Kind::quantum_spectrum || e.kind == Kind::expectation_values)
      CHECK(s.fock == 0);
  }
  CHECK(load("fig12").signal == Signal::p0);
  CHECK(load("fig14").signal == Signal::xi2);
  CHECK(load("fig7").signal == Signal::xi);
}

TEST_CASE("classical horizon is the quoted simulation time") {
  PhysicalConfig lab;
  CHECK(tau_to_seconds(load("fig5").tau_end, lab.trap_omega) == doctest::Approx(31.8e-6).epsilon(2e-3));
}

TEST_CASE("Poincare fan") {
  for (const char* name : {"fig4a", "fig4b"}) {
    const Scenario s = load(name);
    REQUIRE(s.initial.size() == 7);
    for (std::size_t k = 0; k < 7; ++k) {
      CHECK(s.initial[k].xi == 0.5 * k);
      CHECK(s.initial[k].v == 0.0);
    }
    CHECK(s.poincare_periods == 500);
  }
}

TEST_CASE("scan presets") {
  const Scenario full = load("chaos-scan");
  CHECK(full.kind == Kind::chaos_scan);
  CHECK(full.epsilons.size() == 41);
  CHECK(full.epsilons.front() == 0.0);
  CHECK(full.epsilons.back() == 20.0);
  const Scenario small = load("chaos-scan-fig5");
  CHECK(small.epsilons == load("fig5").epsilons);
  CHECK(load("raman-check").format == OutputFormat::json);
}

TEST_CASE("lookup") {
  CHECK(find_preset("fig9") != nullptr);
  CHECK(find_preset("fig99") == nullptr);
  CHECK_THROWS_AS(preset_tree("fig99"), ConfigError);
  const auto t = expand_preset(parse_tree("preset: fig5\nmodel: {epsilon: [1]}\n", "x"), "x");
  const Scenario s = resolve(t, "x");
  CHECK(s.epsilons == std::vector<double>{1.0});
  CHECK(s.kind == Kind::classical_trajectory);
  CHECK_THROWS_AS(expand_preset(parse_tree("preset: nope\n", "x"), "x"), ConfigError);
  for (const auto& p : presets()) CHECK_FALSE(p.description.empty());
}
