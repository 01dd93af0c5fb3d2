#include "elastica/shapes.h"

#include "elastica/errors.h"
#include "elastica/harmonics.h"
#include "elastica/path.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace elastica {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Mat3 rotation(const SphereRotation& r) {
  const double len = r.axis.norm();
  if (!(len > 0.0)) throw ValidationError("rotation axis must be non-zero");
  return Eigen::AngleAxisd(r.angle, r.axis / len).toRotationMatrix();
}

// Stereographic projection from the north pole and back.
std::complex<double> to_chart(const Vec3& x) { return {x.x() / (1.0 - x.z()), x.y() / (1.0 - x.z())}; }

Vec3 from_chart(std::complex<double> z) {
  const double r2 = std::norm(z);
  return Vec3(2.0 * z.real(), 2.0 * z.imag(), r2 - 1.0) / (r2 + 1.0);
}

bool is_north_pole(const Vec3& x) { return x.z() >= 1.0 - 1e-15; }

// Node (i, j) with rows continued over the poles: row -i is row i seen from
// the opposite meridian. Odd nv has no opposite column, so rows clamp.
Vec3 node(const VectorField& f, int i, int j) {
  const GridShape& g = f.shape();
  const int last = g.nu - 1;
  if (g.nv % 2 == 0 && (i < 0 || i > last)) {
    return f.wrapped(i < 0 ? -i : 2 * last - i, j + g.nv / 2);
  }
  return f.wrapped(std::clamp(i, 0, last), j);
}

// Cubic convolution weights (Keys, a = -1/2) for offsets -1, 0, 1, 2.
std::array<double, 4> keys_weights(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {-0.5 * t3 + t2 - 0.5 * t, 1.5 * t3 - 2.5 * t2 + 1.0, -1.5 * t3 + 2.0 * t2 + 0.5 * t, 0.5 * t3 - 0.5 * t2};
}

// C1 bicubic resampling in (u, v); bilinear leaves kinks that second
// differences turn into O(1) curvature noise.
Vec3 bicubic(const Surface& s, double u, double v) {
  const GridShape& g = s.shape();
  const double a = u / g.du();
  const int i0 = std::clamp(static_cast<int>(std::floor(a)), 0, g.nu - 2);
  const double ta = std::clamp(a - i0, 0.0, 1.0);
  const double b = v / g.dv();
  const int j0 = static_cast<int>(std::floor(b));
  const auto wu = keys_weights(ta);
  const auto wv = keys_weights(b - j0);
  Vec3 out = Vec3::Zero();
  for (int p = 0; p < 4; ++p) {
    Vec3 row = Vec3::Zero();
    for (int q = 0; q < 4; ++q) row += wv[q] * node(s.points(), i0 - 1 + p, j0 - 1 + q);
    out += wu[p] * row;
  }
  return out;
}

}  // namespace

ShapeRecipe blend(const ShapeRecipe& a, const ShapeRecipe& b, double t) {
  return ShapeRecipe{LinearBlend{std::make_shared<const ShapeRecipe>(a), std::make_shared<const ShapeRecipe>(b), t}};
}

Vec3 sphere_point(double u, double v) {
  return Vec3(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
}

std::pair<double, double> sphere_angles(const Vec3& x) {
  const double u = std::acos(std::clamp(x.z() / x.norm(), -1.0, 1.0));
  double v = std::atan2(x.y(), x.x());
  if (v < 0.0) v += 2.0 * std::numbers::pi;
  return {u, v};
}

Vec3 apply_inverse(const ReparamRecipe& r, const Vec3& x, int nv) {
  return std::visit(overloaded{
                        [&](const IdentityReparam&) -> Vec3 { return x; },
                        [&](const SphereRotation& rot) -> Vec3 { return rotation(rot).transpose() * x; },
                        [&](const Moebius& mb) -> Vec3 {
                          if (!(mb.alpha > 0.0)) throw ValidationError("Moebius scale must be positive");
                          if (is_north_pole(x)) return x;
                          return from_chart((to_chart(x) - mb.beta) / mb.alpha);
                        },
                        [&](const VShift& s) -> Vec3 {
                          return Eigen::AngleAxisd(-2.0 * std::numbers::pi * s.j / nv, Vec3::UnitZ()) * x;
                        },
                    },
                    r);
}

Vec3 apply(const ReparamRecipe& r, const Vec3& x, int nv) {
  return std::visit(overloaded{
                        [&](const IdentityReparam&) -> Vec3 { return x; },
                        [&](const SphereRotation& rot) -> Vec3 { return rotation(rot) * x; },
                        [&](const Moebius& mb) -> Vec3 {
                          if (!(mb.alpha > 0.0)) throw ValidationError("Moebius scale must be positive");
                          if (is_north_pole(x)) return x;
                          return from_chart(mb.alpha * to_chart(x) + mb.beta);
                        },
                        [&](const VShift& s) -> Vec3 {
                          return Eigen::AngleAxisd(2.0 * std::numbers::pi * s.j / nv, Vec3::UnitZ()) * x;
                        },
                    },
                    r);
}

Vec3 evaluate(const ShapeRecipe& recipe, double u, double v) {
  return std::visit(overloaded{
                        [&](const Sphere& s) -> Vec3 { return s.radius * sphere_point(u, v); },
                        [&](const Ellipsoid& e) -> Vec3 { return e.axes.cwiseProduct(sphere_point(u, v)); },
                        [&](const BumpSphere& b) -> Vec3 {
                          // Schmidt semi-normalization keeps |Y| <= 1.
                          const double schmidt = std::sqrt(4.0 * std::numbers::pi / (2.0 * b.l + 1.0));
                          const double r = b.radius + b.amplitude * schmidt * real_harmonic(b.l, b.m, u, v);
                          return b.stretch.cwiseProduct(r * sphere_point(u, v));
                        },
                        [&](const LinearBlend& lb) -> Vec3 {
                          return (1.0 - lb.t) * evaluate(*lb.first, u, v) + lb.t * evaluate(*lb.second, u, v);
                        },
                    },
                    recipe.kind);
}

Surface generate(const ShapeRecipe& recipe, const GridShape& grid, const ReparamRecipe& reparam) {
  VectorField pts(grid);
  const bool identity = std::holds_alternative<IdentityReparam>(reparam);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      if (identity) {
        pts(i, j) = evaluate(recipe, grid.u(i), grid.v(j));
      } else {
        const auto [u, v] = sphere_angles(apply_inverse(reparam, sphere_point(grid.u(i), grid.v(j)), grid.nv));
        pts(i, j) = evaluate(recipe, u, v);
      }
    }
  }
  return Surface(std::move(pts));
}

Surface reparameterize(const Surface& s, const ReparamRecipe& r) {
  const GridShape& g = s.shape();
  if (std::holds_alternative<IdentityReparam>(r)) return s;
  VectorField pts(g);
  if (const auto* shift = std::get_if<VShift>(&r)) {
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) pts(i, j) = s.points().wrapped(i, j - shift->j);
    }
    return Surface(std::move(pts));
  }
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const auto [u, v] = sphere_angles(apply_inverse(r, sphere_point(g.u(i), g.v(j)), g.nv));
      pts(i, j) = bicubic(s, u, v);
    }
  }
  return Surface(std::move(pts));
}

Path gauge_transform_path(const Path& path, const std::vector<ReparamRecipe>& schedule) {
  if (schedule.size() != path.frames.size()) {
    throw ValidationError("reparameterization schedule needs one entry per frame");
  }
  Path out;
  out.frames.reserve(path.frames.size());
  for (std::size_t k = 0; k < path.frames.size(); ++k) out.frames.push_back(reparameterize(path.frames[k], schedule[k]));
  return out;
}

Path generate_path(const std::vector<ShapeRecipe>& keyframes, int frames, const GridShape& grid,
                   const std::vector<ReparamRecipe>& schedule) {
  if (keyframes.size() < 2) throw ValidationError("a path recipe needs at least two keyframes");
  if (frames < 2) throw ValidationError("a path needs at least two frames");
  if (!schedule.empty() && static_cast<int>(schedule.size()) != frames) {
    throw ValidationError("reparameterization schedule needs one entry per frame");
  }
  const int segments = static_cast<int>(keyframes.size()) - 1;
  Path path;
  for (int k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / (frames - 1) * segments;
    const int seg = std::min(static_cast<int>(std::floor(t)), segments - 1);
    const double s = t - seg;
    const ShapeRecipe frame = s == 0.0   ? keyframes[seg]
                              : s == 1.0 ? keyframes[seg + 1]
                                         : blend(keyframes[seg], keyframes[seg + 1], s);
    path.frames.push_back(generate(frame, grid, schedule.empty() ? ReparamRecipe{IdentityReparam{}} : schedule[k]));
  }
  return path;
}

std::vector<ReparamRecipe> rotation_schedule(const Vec3& axis, double max_angle, int frames) {
  std::vector<ReparamRecipe> out;
  for (int k = 0; k < frames; ++k) {
    out.push_back(SphereRotation{axis, max_angle * k / (frames - 1.0)});
  }
  return out;
}

std::vector<ReparamRecipe> returning_rotation_schedule(const Vec3& axis, double amplitude, int frames) {
  std::vector<ReparamRecipe> out;
  for (int k = 0; k < frames; ++k) {
    out.push_back(SphereRotation{axis, amplitude * std::sin(std::numbers::pi * k / (frames - 1.0))});
  }
  return out;
}

}  // namespace elastica
