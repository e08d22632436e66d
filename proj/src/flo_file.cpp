#include "divfree/flo_file.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "divfree/errors.hpp"

namespace divfree {

namespace {

constexpr char magic[4] = {'F', 'L', 'O', '1'};
constexpr std::uint32_t flo_version = 1;
constexpr std::uint32_t flo_ndim = 4;
constexpr std::uint8_t dtype_float64 = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_flo(const FloArray& array) {
  if (array.data.size() != array.element_count()) throw InvalidArgument("FLO1: data size does not match dims");
  std::vector<std::uint8_t> out;
  out.reserve(flo_header_size + 8 * array.data.size() + 8);
  out.insert(out.end(), std::begin(magic), std::end(magic));
  put_u32(out, flo_version);
  put_u32(out, flo_ndim);
  put_u32(out, array.t);
  put_u32(out, array.c);
  put_u32(out, array.h);
  put_u32(out, array.w);
  out.push_back(dtype_float64);
  for (double x : array.data) put_u64(out, std::bit_cast<std::uint64_t>(x));
  put_u64(out, static_cast<std::uint64_t>(8 * array.data.size()));
  return out;
}

FloArray decode_flo(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) throw FormatError(0, "file shorter than the magic");
  if (std::memcmp(bytes.data(), magic, 4) != 0) throw FormatError(0, "bad magic, expected \"FLO1\"");
  if (bytes.size() < flo_header_size + 8) throw FormatError(bytes.size(), "truncated header");
  if (const auto v = get_u32(bytes, 4); v != flo_version)
    throw FormatError(4, "unsupported version " + std::to_string(v));
  if (const auto n = get_u32(bytes, 8); n != flo_ndim) throw FormatError(8, "ndim must be 4, got " + std::to_string(n));

  FloArray array;
  array.t = get_u32(bytes, 12);
  array.c = get_u32(bytes, 16);
  array.h = get_u32(bytes, 20);
  array.w = get_u32(bytes, 24);
  const std::uint32_t dims[4] = {array.t, array.c, array.h, array.w};
  for (int i = 0; i < 4; ++i)
    if (dims[i] == 0) throw FormatError(12 + 4 * i, "zero dimension");
  if (bytes[28] != dtype_float64) throw FormatError(28, "unsupported dtype " + std::to_string(bytes[28]));

  const std::uint64_t payload_bytes = 8ULL * array.t * array.c * array.h * array.w;
  const std::uint64_t footer_at = bytes.size() - 8;
  if (flo_header_size + payload_bytes != footer_at)
    throw FormatError(12, "dims imply a " + std::to_string(payload_bytes) + "-byte payload but the file holds " +
                              std::to_string(footer_at - flo_header_size));
  if (const auto footer = get_u64(bytes, footer_at); footer != payload_bytes)
    throw FormatError(footer_at, "footer length " + std::to_string(footer) + " does not match payload " +
                                     std::to_string(payload_bytes));

  array.data.resize(array.element_count());
  for (std::size_t i = 0; i < array.data.size(); ++i)
    array.data[i] = std::bit_cast<double>(get_u64(bytes, flo_header_size + 8 * i));
  return array;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

void write_flo(const std::filesystem::path& path, const FloArray& array) { write_bytes(path, encode_flo(array)); }

FloArray read_flo(const std::filesystem::path& path) { return decode_flo(read_bytes(path)); }

std::string content_checksum(const std::vector<std::uint8_t>& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    crc = crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return std::string("crc32:") + buf;
}

FloArray to_flo(const std::vector<VectorField2>& frames) {
  if (frames.empty()) throw InvalidArgument("FLO1: need at least one frame");
  const Grid& grid = frames.front().grid();
  FloArray array{static_cast<std::uint32_t>(frames.size()), 2, static_cast<std::uint32_t>(grid.ny()),
                 static_cast<std::uint32_t>(grid.nx()), {}};
  array.data.reserve(array.element_count());
  for (const auto& f : frames) {
    if (!(f.grid() == grid)) throw InvalidArgument("FLO1: frames on different grids");
    array.data.insert(array.data.end(), f.u().values().begin(), f.u().values().end());
    array.data.insert(array.data.end(), f.v().values().begin(), f.v().values().end());
  }
  return array;
}

std::vector<VectorField2> frames_from_flo(const FloArray& array, double length) {
  if (array.c != 2) throw InvalidArgument("FLO1: expected 2 velocity channels, got " + std::to_string(array.c));
  const Grid grid(static_cast<int>(array.w), static_cast<int>(array.h), length);
  const std::size_t plane = grid.size();
  std::vector<VectorField2> frames;
  frames.reserve(array.t);
  for (std::size_t t = 0; t < array.t; ++t) {
    const auto base = array.data.begin() + static_cast<std::ptrdiff_t>(2 * plane * t);
    frames.emplace_back(ScalarField(grid, std::vector<double>(base, base + plane)),
                        ScalarField(grid, std::vector<double>(base + plane, base + 2 * plane)));
  }
  return frames;
}

}  // namespace divfree
