#pragma once

#include "elastica/grid.h"
#include "elastica/surface.h"

#include <complex>
#include <memory>
#include <variant>
#include <vector>

namespace elastica {

struct Path;

struct Sphere {
  double radius = 1.0;
};

struct Ellipsoid {
  Vec3 axes{1.0, 1.0, 1.0};
};

// Radial bump r = R + amplitude * Y_l^m (Schmidt-normalized, |Y| <= 1),
// optionally stretched along the coordinate axes afterwards.
struct BumpSphere {
  double radius = 1.0;
  double amplitude = 0.1;
  int l = 5;
  int m = 3;
  Vec3 stretch{1.0, 1.0, 1.0};
};

struct ShapeRecipe;

// Pointwise (1 - t) * first + t * second in the parameter domain.
struct LinearBlend {
  std::shared_ptr<const ShapeRecipe> first;
  std::shared_ptr<const ShapeRecipe> second;
  double t = 0.5;
};

struct ShapeRecipe {
  std::variant<Sphere, Ellipsoid, BumpSphere, LinearBlend> kind;
};

ShapeRecipe blend(const ShapeRecipe& a, const ShapeRecipe& b, double t);

struct SphereRotation {
  Vec3 axis{0.0, 0.0, 1.0};
  double angle = 0.0;
};

// z -> alpha z + beta in the stereographic chart from the north pole.
struct Moebius {
  double alpha = 0.4;
  std::complex<double> beta{0.5, 0.0};
};

// Rotation of the azimuth by j grid columns; exact on the grid.
struct VShift {
  int j = 0;
};

struct IdentityReparam {};

// An orientation-preserving diffeomorphism gamma of the parameter sphere.
// Reparameterizing a surface means replacing f by f o gamma^{-1}.
using ReparamRecipe = std::variant<IdentityReparam, SphereRotation, Moebius, VShift>;

Vec3 sphere_point(double u, double v);
// (u, v) of a unit vector, v in [0, 2 pi).
std::pair<double, double> sphere_angles(const Vec3& x);

// gamma^{-1}(x) on the unit sphere. VShift needs the grid's column count.
Vec3 apply_inverse(const ReparamRecipe& r, const Vec3& x, int nv);
Vec3 apply(const ReparamRecipe& r, const Vec3& x, int nv);

// Analytic point of the shape at parameter (u, v).
Vec3 evaluate(const ShapeRecipe& recipe, double u, double v);

// Exact evaluation on the grid, optionally precomposed with gamma^{-1}.
Surface generate(const ShapeRecipe& recipe, const GridShape& grid, const ReparamRecipe& reparam = IdentityReparam{});

// f o gamma^{-1} by cubic convolution in (u, v), periodic in v and continued
// across the poles. VShift is an exact column rotation.
Surface reparameterize(const Surface& s, const ReparamRecipe& r);

// Frame-by-frame reparameterization; schedule must have one entry per frame.
Path gauge_transform_path(const Path& path, const std::vector<ReparamRecipe>& schedule);

// Frames sampled uniformly in time from the piecewise-linear (in the
// parameter domain) interpolation through the keyframes, each frame
// precomposed analytically with schedule[k] when a schedule is given.
Path generate_path(const std::vector<ShapeRecipe>& keyframes, int frames, const GridShape& grid,
                   const std::vector<ReparamRecipe>& schedule = {});

// Rotation by angle(t) = max_angle * t about a fixed axis, one entry per frame.
std::vector<ReparamRecipe> rotation_schedule(const Vec3& axis, double max_angle, int frames);
// Rotation by amplitude * sin(pi t), identity at both ends.
std::vector<ReparamRecipe> returning_rotation_schedule(const Vec3& axis, double amplitude, int frames);

}  // namespace elastica
