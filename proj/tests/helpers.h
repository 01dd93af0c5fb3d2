#pragma once

#include "elastica/shapes.h"
#include "elastica/surface.h"

#include <cmath>

namespace testing {

inline elastica::Surface sphere(double r, int nu, int nv = 0) {
  return elastica::generate(elastica::ShapeRecipe{elastica::Sphere{r}}, elastica::GridShape{nu, nv ? nv : nu});
}

inline elastica::Surface ellipsoid(double a, double b, double c, int nu, int nv = 0) {
  return elastica::generate(elastica::ShapeRecipe{elastica::Ellipsoid{elastica::Vec3(a, b, c)}},
                            elastica::GridShape{nu, nv ? nv : nu});
}

inline elastica::Surface bump(double r, double amp, int l, int m, int nu, int nv = 0) {
  return elastica::generate(elastica::ShapeRecipe{elastica::BumpSphere{r, amp, l, m}},
                            elastica::GridShape{nu, nv ? nv : nu});
}

inline double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace testing
