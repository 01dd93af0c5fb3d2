#pragma once

#include "elastica/surface.h"

#include <vector>

namespace elastica {

// Frames on the uniform times t_k = k / (T - 1).
struct Path {
  std::vector<Surface> frames;

  int size() const { return static_cast<int>(frames.size()); }
  const GridShape& shape() const { return frames.front().shape(); }
  double dt() const { return 1.0 / (size() - 1); }
  double time(int k) const { return k * dt(); }

  // Throws ValidationError for fewer than two frames and NonUniformGrid
  // naming the first frame whose grid differs from frame 0.
  void validate() const;
};

// Straight-line interpolation between two surfaces of the same grid.
Path linear_path(const Surface& from, const Surface& to, int frames);

// Linear interpolation through the given surfaces at equally spaced knots.
Path piecewise_linear_path(const std::vector<Surface>& knots, int frames);

}  // namespace elastica
