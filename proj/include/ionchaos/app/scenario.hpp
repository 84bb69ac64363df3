// Executes a resolved Scenario and writes its data files.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ionchaos/app/config.hpp"
#include "ionchaos/app/manifest.hpp"
#include "ionchaos/csv.hpp"

namespace ionchaos::app {

struct RunReport {
  std::vector<OutputFile> files;      // in a fixed order independent of workers
  std::vector<std::string> failures;  // numerical failures; outputs of other jobs are kept
};

/// Writes one file per job into out_dir (created if needed), then
/// manifest.json.  Jobs run on up to `workers` threads.
RunReport run_scenario(const Scenario& s, const std::filesystem::path& out_dir, int workers = 1);

/// Serialized form of a table in the scenario's output format.
std::string render_table(const csv::Table& t, OutputFormat format);

/// Lambda tensors, the 3-j comparison and the coupling-constant scale.
nlohmann::json raman_report();

/// Short tag used in output file names, e.g. 7.5 -> "eps7.5".
std::string epsilon_tag(double epsilon);

}  // namespace ionchaos::app
