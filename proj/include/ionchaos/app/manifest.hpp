// Run manifests: resolved scenario, library versions and per-file SHA-256.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionchaos/app/config.hpp"

namespace ionchaos::app {

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

inline constexpr const char* manifest_name = "manifest.json";

std::string tool_version();

nlohmann::json make_manifest(const Scenario& s, const std::vector<OutputFile>& files,
                             const std::vector<std::string>& failures);

/// A parsed manifest carries the resolved scenario under "scenario".
bool looks_like_manifest(const nlohmann::json& j);

/// Names of files whose checksum differs from (or is missing in) `files`.
std::vector<std::string> checksum_mismatches(const nlohmann::json& manifest,
                                             const std::vector<OutputFile>& files);

}  // namespace ionchaos::app
