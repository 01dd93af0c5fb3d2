#include "elastica/errors.h"
#include "elastica/io.h"
#include "helpers.h"

#include <doctest.h>

#include <sstream>

using namespace elastica;

namespace {

template <typename F>
std::uint64_t parse_offset(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.byte_offset();
  }
  FAIL("expected ParseError");
  return 0;
}

int count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("GIS1 layout and round trip") {
    const Surface s = testing::bump(1, 0.1, 3, 2, 9, 12);
    const auto bytes = encode_gis1(s);
    CHECK(bytes.size() == 12 + 9 * 12 * 24);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "GIS1");
    CHECK(bytes[4] == 9);
    CHECK(bytes[8] == 12);
    const Surface back = decode_gis1(bytes);
    CHECK(back.shape() == s.shape());
    for (std::size_t q = 0; q < s.points().size(); ++q) CHECK(back.points()[q] == s.points()[q]);
  }

  TEST_CASE("GIS1 errors carry the byte offset") {
    auto bytes = encode_gis1(testing::sphere(1, 10));
    auto bad_magic = bytes;
    bad_magic[2] = 'X';
    CHECK(parse_offset([&] { decode_gis1(bad_magic); }) == 0);
    auto truncated = bytes;
    truncated.resize(12 + 24 * 5 + 3);
    CHECK(parse_offset([&] { decode_gis1(truncated); }) == 12 + 24 * 5);
    CHECK(parse_offset([&] { decode_gis1(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 6)); }) == 4);
    auto trailing = bytes;
    trailing.push_back(0);
    CHECK(parse_offset([&] { decode_gis1(trailing); }) == bytes.size());
    auto nan = bytes;
    for (int b = 0; b < 8; ++b) nan[12 + 24 * 3 + 8 + b] = 0xff;
    CHECK(parse_offset([&] { decode_gis1(nan); }) == 12 + 24 * 3);
  }

  TEST_CASE("GIP1 round trip") {
    const Path p = linear_path(testing::sphere(1, 10), testing::sphere(2, 10), 4);
    const Path back = decode_gip1(encode_gip1(p));
    REQUIRE(back.size() == 4);
    for (int k = 0; k < 4; ++k) {
      for (std::size_t q = 0; q < 100; ++q) CHECK(back.frames[k].points()[q] == p.frames[k].points()[q]);
    }
    auto bytes = encode_gip1(p);
    bytes[4] = 1;
    CHECK(parse_offset([&] { decode_gip1(bytes); }) == 4);
  }

  TEST_CASE("text variant") {
    const Surface s = testing::ellipsoid(2, 1, 0.5, 8, 10);
    const Surface back = decode_gis_text(encode_gis_text(s));
    for (std::size_t q = 0; q < s.points().size(); ++q) CHECK(back.points()[q] == s.points()[q]);
    CHECK_THROWS_AS(decode_gis_text("8 8\n1 2 3\n1 2"), ParseError);
    CHECK(parse_offset([] { decode_gis_text("eight 8"); }) == 0);
  }

  TEST_CASE("files dispatch on extension") {
    const auto dir = std::filesystem::temp_directory_path() / "elastica_io_test";
    std::filesystem::remove_all(dir);
    const Surface s = testing::sphere(1.5, 10);
    write_surface(dir / "a.gis", s);
    write_surface(dir / "a.gis.txt", s);
    CHECK(read_surface(dir / "a.gis").points()[17] == s.points()[17]);
    CHECK(read_surface(dir / "a.gis.txt").points()[17] == s.points()[17]);
    CHECK_THROWS_AS(read_surface(dir / "missing.gis"), ValidationError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("OBJ export counts, pole triangles included") {
    const std::string obj = encode_obj(testing::sphere(1, 10));
    CHECK(count_prefix(obj, "v ") == 100);
    CHECK(count_prefix(obj, "f ") == 180);
    ScalarField k(GridShape{10, 10}, 0.5);
    k(3, 3) = 2.0;
    k(0, 0) = std::nan("");
    const std::string coloured = encode_obj(testing::sphere(1, 10), &k);
    CHECK(count_prefix(coloured, "vt ") == 100);
    CHECK(coloured.find("f 1/1 11/11 12/12") != std::string::npos);
  }

  TEST_CASE("content hash") {
    CHECK(hex_digest(content_hash({})) == "cbf29ce484222325");
    const std::vector<std::uint8_t> a{'a'};
    CHECK(hex_digest(content_hash(a)) == "af63dc4c8601ec8c");
    CHECK(content_hash(encode_gis1(testing::sphere(1, 10))) == content_hash(encode_gis1(testing::sphere(1, 10))));
  }
}
