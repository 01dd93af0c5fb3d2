#pragma once

#include "elastica/metric.h"
#include "elastica/surface.h"

#include <array>
#include <vector>

namespace elastica {

// Signed volumes of the two origin-apex tetrahedra over each grid quad
// (i, j), i in [0, nu-2], stored row-major like the grid.
struct VolumeCells {
  GridShape grid;
  std::vector<double> vol1;
  std::vector<double> vol2;
  double total = 0.0;  // positive for outward-oriented surfaces
};

VolumeCells inscribed_volume(const Surface& s);

// Centroid of the inscribed volume. Throws ZeroVolume if |total| < 1e-12.
Vec3 center_of_mass(const Surface& s, const VolumeCells& cells);

// Second moments about the origin, integral of x x^T over the inscribed volume.
Mat3 second_moments(const Surface& s, const VolumeCells& cells);

struct EllipsoidFit {
  Mat3 rotation;               // principal axes as columns, det +1
  Vec3 singular_values;        // descending
  Mat3 semi_axes;              // (4 pi / 15)^{1/5} det(M)^{-1/10} U sqrt(S) U^T
  std::array<double, 2> gaps;  // (s0 - s1) / s0, (s1 - s2) / s0
};

// Throws NotTriaxial if M is not positive definite or two singular values
// are closer than min_gap relative to the largest.
EllipsoidFit fit_ellipsoid(const Mat3& moments, double min_gap = 1e-6);

struct AlignOptions {
  ElasticParams params{};
  PoleMargin margin{};
  EnergyOptions energy{};
  double min_gap = 1e-6;
};

struct AlignmentReport {
  double vol1 = 0.0, vol2 = 0.0;  // inscribed volumes before scaling
  Vec3 center1 = Vec3::Zero(), center2 = Vec3::Zero();  // after scaling
  Mat3 U1 = Mat3::Identity(), U2 = Mat3::Identity();
  std::array<double, 2> gaps1{}, gaps2{};
  int hypothesis = 0;  // index into axis_sign_hypotheses()
  std::array<double, 4> hypothesis_energies{};
  double tie_gap = 0.0;  // energy gap between the best and runner-up hypotheses
  bool rotated = true;   // false when only scale and translation were removed
};

struct AlignedPair {
  Surface first;
  Surface second;
  AlignmentReport report;
};

// The four det +1 sign patterns applied to the principal axes.
const std::array<Vec3, 4>& axis_sign_hypotheses();

// Scale to unit inscribed volume and move the centroid to the origin.
Surface normalize_scale_and_center(const Surface& s, double* volume = nullptr, Vec3* center = nullptr);

// Normalizes both surfaces, then rotates the second so its principal axes
// land on the first's. Among the axis-sign hypotheses the one giving the
// lowest two-frame TRIANGLE energy wins; ties go to the lowest index.
AlignedPair align_pair(const Surface& s1, const Surface& s2, const AlignOptions& opts = {});

// Like align_pair, but a non-triaxial input falls back to scale and
// translation normalization only (report.rotated = false).
AlignedPair align_pair_or_normalize(const Surface& s1, const Surface& s2, const AlignOptions& opts = {});

}  // namespace elastica
