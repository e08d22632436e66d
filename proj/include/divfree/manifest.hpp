#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "divfree/errors.hpp"

namespace divfree {

class ChecksumMismatch : public InvalidArgument {
 public:
  ChecksumMismatch(const std::string& expected, const std::string& actual);
};

/// Sidecar path: "<file>.json".
std::filesystem::path manifest_path(const std::filesystem::path& flo_path);

/// Adds tool version, creation time (UTC, ISO 8601) and the content checksum
/// of `bytes` to `fields`.
nlohmann::json make_manifest(const std::string& command, nlohmann::json fields,
                             const std::vector<std::uint8_t>& bytes);

void write_manifest(const std::filesystem::path& flo_path, const nlohmann::json& manifest);

/// Checks `bytes` against the sidecar checksum when a sidecar exists.
/// Returns false when there is no sidecar.
bool verify_manifest(const std::filesystem::path& flo_path, const std::vector<std::uint8_t>& bytes);

std::string tool_version();

}  // namespace divfree
