#include "divfree/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "divfree/flo_file.hpp"

#ifndef DIVFREE_VERSION
#define DIVFREE_VERSION "0.0.0"
#endif

namespace divfree {

ChecksumMismatch::ChecksumMismatch(const std::string& expected, const std::string& actual)
    : InvalidArgument("checksum mismatch: manifest records " + expected + ", file hashes to " + actual) {}

std::filesystem::path manifest_path(const std::filesystem::path& flo_path) {
  auto p = flo_path;
  p += ".json";
  return p;
}

std::string tool_version() { return DIVFREE_VERSION; }

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

nlohmann::json make_manifest(const std::string& command, nlohmann::json fields,
                             const std::vector<std::uint8_t>& bytes) {
  fields["command"] = command;
  fields["tool_version"] = tool_version();
  fields["created"] = utc_timestamp();
  fields["checksum"] = content_checksum(bytes);
  return fields;
}

void write_manifest(const std::filesystem::path& flo_path, const nlohmann::json& manifest) {
  std::ofstream out(manifest_path(flo_path), std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write manifest for " + flo_path.string());
  out << manifest.dump(2) << '\n';
}

bool verify_manifest(const std::filesystem::path& flo_path, const std::vector<std::uint8_t>& bytes) {
  const auto sidecar = manifest_path(flo_path);
  if (!std::filesystem::exists(sidecar)) return false;
  std::ifstream in(sidecar);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("unreadable manifest " + sidecar.string() + ": " + e.what());
  }
  if (!manifest.contains("checksum")) throw InvalidArgument("manifest " + sidecar.string() + " has no checksum");
  const std::string expected = manifest["checksum"].get<std::string>();
  const std::string actual = content_checksum(bytes);
  if (expected != actual) throw ChecksumMismatch(expected, actual);
  return true;
}

}  // namespace divfree
