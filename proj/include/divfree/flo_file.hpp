#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "divfree/field.hpp"

namespace divfree {

// FLO1 layout, all integers little-endian:
//   offset  0  magic "FLO1"
//   offset  4  u32 version (= 1)
//   offset  8  u32 ndim (= 4)
//   offset 12  u32 dims T, C, H, W
//   offset 28  u8 dtype (1 = float64 LE)
//   offset 29  payload, T-major row-major float64
//   trailing   u64 payload byte length
struct FloArray {
  std::uint32_t t = 0;
  std::uint32_t c = 0;
  std::uint32_t h = 0;
  std::uint32_t w = 0;
  std::vector<double> data;

  std::size_t element_count() const noexcept {
    return static_cast<std::size_t>(t) * c * h * w;
  }
};

inline constexpr std::size_t flo_header_size = 29;

std::vector<std::uint8_t> encode_flo(const FloArray& array);
/// Throws FormatError naming the offset of the first inconsistent field.
FloArray decode_flo(const std::vector<std::uint8_t>& bytes);

void write_flo(const std::filesystem::path& path, const FloArray& array);
FloArray read_flo(const std::filesystem::path& path);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// "crc32:xxxxxxxx" over the full file bytes.
std::string content_checksum(const std::vector<std::uint8_t>& bytes);

/// Velocity frames as a (T, 2, n_y, n_x) array, and back.
FloArray to_flo(const std::vector<VectorField2>& frames);
std::vector<VectorField2> frames_from_flo(const FloArray& array, double length = 1.0);

}  // namespace divfree
