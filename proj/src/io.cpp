#include "elastica/io.h"

#include "elastica/errors.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace elastica {

namespace le {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
}

void Reader::need(std::size_t n, const char* what) {
  if (bytes_.size() - pos_ < n) throw ParseError(std::string("truncated input while reading ") + what, pos_);
}

void Reader::expect_magic(const char (&magic)[5]) {
  need(4, "magic");
  if (std::memcmp(bytes_.data() + pos_, magic, 4) != 0) {
    throw ParseError(std::string("bad magic, expected ") + magic, pos_);
  }
  pos_ += 4;
}

std::uint32_t Reader::u32() {
  need(4, "u32");
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
  pos_ += 4;
  return v;
}

std::int32_t Reader::i32() { return static_cast<std::int32_t>(u32()); }

double Reader::f64() {
  need(8, "float64");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
  pos_ += 8;
  return std::bit_cast<double>(v);
}

}  // namespace le

namespace {

void put_points(std::vector<std::uint8_t>& out, const Surface& s) {
  for (const Vec3& p : s.points()) {
    for (int c = 0; c < 3; ++c) le::put_f64(out, p(c));
  }
}

Surface read_points(le::Reader& in, std::uint32_t nu, std::uint32_t nv) {
  const std::size_t start = in.offset();
  if (nu < 8 || nv < 8 || nu > 1u << 15 || nv > 1u << 15) {
    throw ParseError("grid " + std::to_string(nu) + "x" + std::to_string(nv) + " out of range", start - 8);
  }
  const GridShape g{static_cast<int>(nu), static_cast<int>(nv)};
  // Checked up front so a corrupt header cannot trigger a huge allocation;
  // the offset reported is that of the first incomplete point.
  if (in.remaining() < g.size() * 24) {
    throw ParseError("truncated point payload", in.offset() + in.remaining() / 24 * 24);
  }
  VectorField pts(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const std::size_t at = in.offset();
    const double x = in.f64(), y = in.f64(), z = in.f64();
    pts[q] = Vec3(x, y, z);
    if (!pts[q].allFinite()) throw ParseError("non-finite coordinate", at);
  }
  return Surface(std::move(pts));
}

}  // namespace

std::vector<std::uint8_t> encode_gis1(const Surface& s) {
  std::vector<std::uint8_t> out{'G', 'I', 'S', '1'};
  out.reserve(12 + s.shape().size() * 24);
  le::put_u32(out, static_cast<std::uint32_t>(s.shape().nu));
  le::put_u32(out, static_cast<std::uint32_t>(s.shape().nv));
  put_points(out, s);
  return out;
}

Surface decode_gis1(const std::vector<std::uint8_t>& bytes) {
  le::Reader in(bytes);
  in.expect_magic("GIS1");
  const std::uint32_t nu = in.u32();
  const std::uint32_t nv = in.u32();
  Surface s = read_points(in, nu, nv);
  if (in.remaining() != 0) throw ParseError("trailing bytes after surface payload", in.offset());
  return s;
}

std::vector<std::uint8_t> encode_gip1(const Path& p) {
  p.validate();
  std::vector<std::uint8_t> out{'G', 'I', 'P', '1'};
  le::put_u32(out, static_cast<std::uint32_t>(p.size()));
  le::put_u32(out, static_cast<std::uint32_t>(p.shape().nu));
  le::put_u32(out, static_cast<std::uint32_t>(p.shape().nv));
  for (const Surface& f : p.frames) put_points(out, f);
  return out;
}

Path decode_gip1(const std::vector<std::uint8_t>& bytes) {
  le::Reader in(bytes);
  in.expect_magic("GIP1");
  const std::uint32_t T = in.u32();
  if (T < 2) throw ParseError("a path needs at least two frames", 4);
  const std::uint32_t nu = in.u32();
  const std::uint32_t nv = in.u32();
  Path p;
  for (std::uint32_t k = 0; k < T; ++k) p.frames.push_back(read_points(in, nu, nv));
  if (in.remaining() != 0) throw ParseError("trailing bytes after path payload", in.offset());
  return p;
}

std::string encode_gis_text(const Surface& s) {
  std::ostringstream out;
  out.precision(17);
  out << s.shape().nu << ' ' << s.shape().nv << '\n';
  for (const Vec3& p : s.points()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  return out.str();
}

Surface decode_gis_text(const std::string& text) {
  std::istringstream in(text);
  long nu = 0, nv = 0;
  if (!(in >> nu >> nv)) throw ParseError("missing 'nu nv' header", 0);
  if (nu < 8 || nv < 8 || nu > 1 << 15 || nv > 1 << 15) throw ParseError("grid size out of range", 0);
  const GridShape g{static_cast<int>(nu), static_cast<int>(nv)};
  VectorField pts(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto at = static_cast<std::uint64_t>(std::max<std::streamoff>(in.tellg(), 0));
    double x, y, z;
    if (!(in >> x >> y >> z)) throw ParseError("expected 'x y z' for node " + std::to_string(q), at);
    pts[q] = Vec3(x, y, z);
  }
  return Surface(std::move(pts));
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& file, const std::vector<std::uint8_t>& bytes) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + file.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

namespace {
bool is_text(const std::filesystem::path& file) { return file.extension() == ".txt"; }
}  // namespace

Surface read_surface(const std::filesystem::path& file) {
  const std::vector<std::uint8_t> bytes = read_bytes(file);
  if (is_text(file)) return decode_gis_text(std::string(bytes.begin(), bytes.end()));
  return decode_gis1(bytes);
}

void write_surface(const std::filesystem::path& file, const Surface& s) {
  if (is_text(file)) {
    const std::string text = encode_gis_text(s);
    write_bytes(file, std::vector<std::uint8_t>(text.begin(), text.end()));
  } else {
    write_bytes(file, encode_gis1(s));
  }
}

Path read_path(const std::filesystem::path& file) { return decode_gip1(read_bytes(file)); }

void write_path(const std::filesystem::path& file, const Path& p) { write_bytes(file, encode_gip1(p)); }

std::string encode_obj(const Surface& s, const ScalarField* scalars) {
  const GridShape& g = s.shape();
  std::ostringstream out;
  out.precision(10);
  double lo = 0.0, hi = 0.0;
  if (scalars) {
    bool first = true;
    for (double x : *scalars) {
      if (!std::isfinite(x)) continue;
      lo = first ? x : std::min(lo, x);
      hi = first ? x : std::max(hi, x);
      first = false;
    }
  }
  auto unit = [&](double x) { return !std::isfinite(x) || hi <= lo ? 0.0 : (x - lo) / (hi - lo); };
  for (std::size_t q = 0; q < g.size(); ++q) {
    const Vec3& p = s.points()[q];
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z();
    if (scalars) {
      // Blue to red ramp.
      const double t = unit((*scalars)[q]);
      out << ' ' << t << ' ' << 0.2 << ' ' << 1.0 - t;
    }
    out << '\n';
  }
  if (scalars) {
    for (std::size_t q = 0; q < g.size(); ++q) out << "vt " << unit((*scalars)[q]) << " 0\n";
  }
  auto id = [&](int i, int j) { return g.index(i, g.wrap(j)) + 1; };
  auto face = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (scalars) {
      out << "f " << a << '/' << a << ' ' << b << '/' << b << ' ' << c << '/' << c << '\n';
    } else {
      out << "f " << a << ' ' << b << ' ' << c << '\n';
    }
  };
  for (int i = 0; i + 1 < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      face(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      face(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  }
  return out.str();
}

std::uint64_t content_hash(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = digits[h & 0xf];
  return s;
}

}  // namespace elastica
