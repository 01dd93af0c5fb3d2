#pragma once

#include "elastica/path.h"
#include "elastica/surface.h"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace elastica {

// GIS1: "GIS1", u32 nu, u32 nv, then nu*nv*3 float64 (row-major, x y z),
// all little-endian.
std::vector<std::uint8_t> encode_gis1(const Surface& s);
Surface decode_gis1(const std::vector<std::uint8_t>& bytes);

// GIP1: "GIP1", u32 T, u32 nu, u32 nv, then T frame payloads as in GIS1.
std::vector<std::uint8_t> encode_gip1(const Path& p);
Path decode_gip1(const std::vector<std::uint8_t>& bytes);

// Text interchange: header "nu nv", then one "x y z" line per node.
std::string encode_gis_text(const Surface& s);
Surface decode_gis_text(const std::string& text);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& file);
void write_bytes(const std::filesystem::path& file, const std::vector<std::uint8_t>& bytes);

// Dispatches on extension: ".gis.txt"/".txt" is text, anything else GIS1.
Surface read_surface(const std::filesystem::path& file);
void write_surface(const std::filesystem::path& file, const Surface& s);
Path read_path(const std::filesystem::path& file);
void write_path(const std::filesystem::path& file, const Path& p);

// Triangle mesh of the grid: every quad (i, j), (i+1, j), (i+1, j+1),
// (i, j+1) split along its (i, j)-(i+1, j+1) diagonal, pole triangles
// included, so (nu - 1) * nv * 2 faces. With scalars, each vertex gets a
// colour and a texture coordinate from the normalized value; NaN maps to 0.
std::string encode_obj(const Surface& s, const ScalarField* scalars = nullptr);

// FNV-1a, 64 bit.
std::uint64_t content_hash(const std::vector<std::uint8_t>& bytes);
std::string hex_digest(std::uint64_t h);

namespace le {
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_i32(std::vector<std::uint8_t>& out, std::int32_t v);
void put_f64(std::vector<std::uint8_t>& out, double v);

// Bounds-checked little-endian reader; failures throw ParseError with the
// byte offset of the read that failed.
class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  void expect_magic(const char (&magic)[5]);
  std::uint32_t u32();
  std::int32_t i32();
  double f64();
  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what);
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};
}  // namespace le

}  // namespace elastica
