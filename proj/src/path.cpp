#include "elastica/path.h"

#include "elastica/errors.h"

#include <cmath>

namespace elastica {

void Path::validate() const {
  if (frames.size() < 2) throw ValidationError("a path needs at least two frames");
  const GridShape& g = frames.front().shape();
  for (int k = 1; k < size(); ++k) {
    if (!(frames[k].shape() == g)) {
      throw NonUniformGrid("frame " + std::to_string(k) + " has grid " + std::to_string(frames[k].shape().nu) + "x" +
                               std::to_string(frames[k].shape().nv) + ", expected " + std::to_string(g.nu) + "x" +
                               std::to_string(g.nv),
                           k);
    }
  }
}

Path piecewise_linear_path(const std::vector<Surface>& knots, int frames) {
  if (knots.size() < 2) throw ValidationError("interpolation needs at least two surfaces");
  if (frames < 2) throw ValidationError("a path needs at least two frames");
  const GridShape& g = knots.front().shape();
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k].shape() == g)) throw NonUniformGrid("interpolation knots differ in grid", static_cast<int>(k));
  }
  const int segments = static_cast<int>(knots.size()) - 1;
  Path path;
  for (int k = 0; k < frames; ++k) {
    const double t = static_cast<double>(k) / (frames - 1) * segments;
    const int seg = std::min(static_cast<int>(std::floor(t)), segments - 1);
    const double s = t - seg;
    if (s == 0.0) {
      path.frames.push_back(knots[seg]);
    } else if (s == 1.0) {
      path.frames.push_back(knots[seg + 1]);
    } else {
      VectorField pts(g);
      for (std::size_t q = 0; q < pts.size(); ++q) {
        // a + s (b - a) reproduces a exactly where the knots coincide
        const Vec3& a = knots[seg].points()[q];
        pts[q] = a + s * (knots[seg + 1].points()[q] - a);
      }
      path.frames.emplace_back(std::move(pts));
    }
  }
  return path;
}

Path linear_path(const Surface& from, const Surface& to, int frames) {
  return piecewise_linear_path({from, to}, frames);
}

}  // namespace elastica
