#include "ionchaos/app/manifest.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <Eigen/Core>
#include <fftw3.h>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#ifndef IONCHAOS_VERSION
#define IONCHAOS_VERSION "unknown"
#endif

namespace ionchaos::app {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("SHA-256 initialisation failed");
  }
  void update(const char* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1)
      throw std::runtime_error("SHA-256 finalisation failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (is) {
    is.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  return h.hex();
}

std::string tool_version() { return IONCHAOS_VERSION; }

nlohmann::json make_manifest(const Scenario& s, const std::vector<OutputFile>& files,
                             const std::vector<std::string>& failures) {
  nlohmann::json j;
  j["tool"] = "ionchaos";
  j["version"] = tool_version();
  j["libraries"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"fftw", std::string(fftw_version)},
      {"openssl", std::string(OPENSSL_VERSION_TEXT)},
  };
  j["scenario"] = to_json(s);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : files) list.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = list;
  j["failures"] = failures;
  return j;
}

bool looks_like_manifest(const nlohmann::json& j) {
  return j.is_object() && j.contains("scenario") && j.contains("files") && j["files"].is_array();
}

std::vector<std::string> checksum_mismatches(const nlohmann::json& manifest,
                                             const std::vector<OutputFile>& files) {
  std::map<std::string, std::string> now;
  for (const auto& f : files) now[f.name] = f.sha256;
  std::vector<std::string> bad;
  for (const auto& f : manifest.at("files")) {
    const auto name = f.at("name").get<std::string>();
    const auto it = now.find(name);
    if (it == now.end() || it->second != f.at("sha256").get<std::string>()) bad.push_back(name);
    if (it != now.end()) now.erase(it);
  }
  for (const auto& [name, sha] : now) bad.push_back(name);
  return bad;
}

}  // namespace ionchaos::app
