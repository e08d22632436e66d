#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <zlib.h>

#include "divfree/errors.hpp"
#include "divfree/flo_file.hpp"
#include "divfree/manifest.hpp"
#include "test_support.hpp"

using namespace divfree;
using namespace divfree::testing;

namespace {

FloArray random_array(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dim(1, 6);
  std::uniform_int_distribution<std::uint64_t> bits;
  FloArray a{dim(rng), dim(rng), dim(rng), dim(rng), {}};
  a.data.resize(a.element_count());
  // Arbitrary bit patterns, NaN payloads and signed zeros included.
  for (double& x : a.data) {
    const std::uint64_t b = bits(rng);
    std::memcpy(&x, &b, sizeof x);
  }
  return a;
}

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::size_t error_offset(const std::vector<std::uint8_t>& bytes) {
  try {
    (void)decode_flo(bytes);
  } catch (const FormatError& e) {
    return e.offset();
  }
  return static_cast<std::size_t>(-1);
}

struct TempDir {
  std::filesystem::path path = std::filesystem::temp_directory_path() /
                               ("divfree_flo_" + std::to_string(std::random_device{}()));
  TempDir() { std::filesystem::create_directories(path); }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("header layout") {
  FloArray a{2, 2, 3, 4, std::vector<double>(48, 1.5)};
  const auto bytes = encode_flo(a);
  REQUIRE(bytes.size() == 29 + 48 * 8 + 8);
  CHECK(std::memcmp(bytes.data(), "FLO1", 4) == 0);
  CHECK(le32(bytes, 4) == 1);
  CHECK(le32(bytes, 8) == 4);
  CHECK(le32(bytes, 12) == 2);
  CHECK(le32(bytes, 16) == 2);
  CHECK(le32(bytes, 20) == 3);
  CHECK(le32(bytes, 24) == 4);
  CHECK(bytes[28] == 1);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + 29, 8);
  CHECK(first == 1.5);
  std::uint64_t footer = 0;
  for (int i = 7; i >= 0; --i) footer = (footer << 8) | bytes[bytes.size() - 8 + static_cast<std::size_t>(i)];
  CHECK(footer == 48 * 8);
}

TEST_CASE("round trip is bit-exact over 100 random files") {
  std::mt19937_64 rng(101);
  TempDir dir;
  for (int i = 0; i < 100; ++i) {
    const auto a = random_array(rng);
    const auto path = dir.path / ("f" + std::to_string(i) + ".flo");
    write_flo(path, a);
    const auto b = read_flo(path);
    CHECK(b.t == a.t);
    CHECK(b.c == a.c);
    CHECK(b.h == a.h);
    CHECK(b.w == a.w);
    REQUIRE(b.data.size() == a.data.size());
    CHECK(std::memcmp(b.data.data(), a.data.data(), a.data.size() * sizeof(double)) == 0);
    CHECK(encode_flo(b) == read_bytes(path));
  }
}

TEST_CASE("corruption is located") {
  FloArray a{1, 2, 4, 4, std::vector<double>(32, 0.25)};
  const auto good = encode_flo(a);
  CHECK_NOTHROW(decode_flo(good));

  auto bad = good;
  bad[1] = 'X';
  CHECK(error_offset(bad) == 0);
  bad = good;
  bad[4] = 2;
  CHECK(error_offset(bad) == 4);
  bad = good;
  bad[8] = 3;
  CHECK(error_offset(bad) == 8);
  bad = good;
  bad[16] = 0;  // C = 0
  CHECK(error_offset(bad) == 16);
  bad = good;
  bad[20] = 5;  // H changes: payload size no longer matches
  CHECK(error_offset(bad) == 12);
  bad = good;
  bad[28] = 2;
  CHECK(error_offset(bad) == 28);
  bad = good;
  bad[bad.size() - 8] ^= 0x01;
  CHECK(error_offset(bad) == bad.size() - 8);
  bad = good;
  bad.pop_back();
  CHECK(error_offset(bad) != static_cast<std::size_t>(-1));
  CHECK(error_offset(std::vector<std::uint8_t>(10, 0)) == 0);
  CHECK_THROWS_AS(read_flo("/nonexistent/x.flo"), InvalidArgument);
}

TEST_CASE("checksum is zlib crc32 and flags single-byte corruption") {
  std::mt19937_64 rng(102);
  const auto bytes = encode_flo(random_array(rng));
  char expected[32];
  std::snprintf(expected, sizeof expected, "crc32:%08lx", crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
  CHECK(content_checksum(bytes) == expected);
  for (std::size_t i = 0; i < bytes.size(); i += 7) {
    auto flipped = bytes;
    flipped[i] ^= 0x40;
    CHECK(content_checksum(flipped) != content_checksum(bytes));
  }
}

TEST_CASE("manifest sidecar") {
  TempDir dir;
  const auto path = dir.path / "a.flo";
  FloArray a{1, 2, 4, 4, std::vector<double>(32, 0.5)};
  write_flo(path, a);
  const auto bytes = read_bytes(path);
  CHECK(manifest_path(path) == dir.path / "a.flo.json");
  CHECK_FALSE(verify_manifest(path, bytes));
  const auto m = make_manifest("test", {{"seed", 3}}, bytes);
  CHECK(m["command"] == "test");
  CHECK(m["seed"] == 3);
  CHECK(m["checksum"] == content_checksum(bytes));
  CHECK(m["tool_version"] == tool_version());
  CHECK(m["created"].get<std::string>().back() == 'Z');
  write_manifest(path, m);
  CHECK(verify_manifest(path, bytes));
  auto changed = bytes;
  changed[40] ^= 1;
  CHECK_THROWS_AS(verify_manifest(path, changed), ChecksumMismatch);
}

TEST_CASE("velocity frames convert to and from (T, 2, H, W)") {
  std::mt19937_64 rng(103);
  const Grid g(8, 4);
  std::vector<VectorField2> frames{random_vector(g, rng), random_vector(g, rng), random_vector(g, rng)};
  const auto a = to_flo(frames);
  CHECK(a.t == 3);
  CHECK(a.c == 2);
  CHECK(a.h == 4);
  CHECK(a.w == 8);
  CHECK(a.data[1 * 64 + 32 + 8 * 2 + 5] == frames[1].v()(5, 2));
  const auto back = frames_from_flo(a);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(max_abs_diff(back[i].u(), frames[i].u()) == 0.0);
    CHECK(max_abs_diff(back[i].v(), frames[i].v()) == 0.0);
  }
  FloArray scalar{1, 1, 4, 4, std::vector<double>(16, 0.0)};
  CHECK_THROWS_AS(frames_from_flo(scalar), InvalidArgument);
}
