#include "elastica/alignment.h"

#include "elastica/errors.h"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

namespace elastica {

namespace {

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.cross(b).dot(c); }

Surface transform(const Surface& s, const Mat3& rot, double scale, const Vec3& shift) {
  VectorField pts(s.shape());
  for (std::size_t q = 0; q < pts.size(); ++q) pts[q] = rot * (scale * s.points()[q] - shift);
  return Surface(std::move(pts));
}

}  // namespace

VolumeCells inscribed_volume(const Surface& s) {
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  VolumeCells cells;
  cells.grid = g;
  const std::size_t n = static_cast<std::size_t>(g.nu - 1) * g.nv;
  cells.vol1.resize(n);
  cells.vol2.resize(n);
  for (int i = 0; i < g.nu - 1; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& p00 = f(i, j);
      const Vec3& p10 = f(i + 1, j);
      const Vec3& p01 = f.wrapped(i, j + 1);
      const Vec3& p11 = f.wrapped(i + 1, j + 1);
      // Oriented so that f_u x f_v pointing outward gives positive volume.
      const double v1 = det3(p10 - p00, p01 - p00, p00) / 6.0;
      const double v2 = det3(p01 - p11, p10 - p11, p11) / 6.0;
      const std::size_t k = g.index(i, j);
      cells.vol1[k] = v1;
      cells.vol2[k] = v2;
      row += v1 + v2;
    }
    cells.total += row;
  }
  return cells;
}

Vec3 center_of_mass(const Surface& s, const VolumeCells& cells) {
  if (std::abs(cells.total) < 1e-12) throw ZeroVolume("inscribed volume is zero; the centroid is undefined");
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  Vec3 moment = Vec3::Zero();
  for (int i = 0; i < g.nu - 1; ++i) {
    Vec3 row = Vec3::Zero();
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& p00 = f(i, j);
      const Vec3& p10 = f(i + 1, j);
      const Vec3& p01 = f.wrapped(i, j + 1);
      const Vec3& p11 = f.wrapped(i + 1, j + 1);
      const std::size_t k = g.index(i, j);
      row += cells.vol1[k] * 0.25 * (p00 + p10 + p01) + cells.vol2[k] * 0.25 * (p11 + p10 + p01);
    }
    moment += row;
  }
  return moment / cells.total;
}

Mat3 second_moments(const Surface& s, const VolumeCells& cells) {
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  Mat3 M = Mat3::Zero();
  // Exact tetrahedron quadrature: for vertices 0, a, b, c the integral of
  // x x^T is vol/20 * ((a+b)(a+b)^T + (a+c)(a+c)^T + (b+c)(b+c)^T).
  auto pairs = [](const Vec3& a, const Vec3& b, const Vec3& c) -> Mat3 {
    const Vec3 ab = a + b, ac = a + c, bc = b + c;
    return (ab * ab.transpose() + ac * ac.transpose() + bc * bc.transpose()) / 20.0;
  };
  for (int i = 0; i < g.nu - 1; ++i) {
    Mat3 row = Mat3::Zero();
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& p00 = f(i, j);
      const Vec3& p10 = f(i + 1, j);
      const Vec3& p01 = f.wrapped(i, j + 1);
      const Vec3& p11 = f.wrapped(i + 1, j + 1);
      const std::size_t k = g.index(i, j);
      row += cells.vol1[k] * pairs(p00, p01, p10) + cells.vol2[k] * pairs(p11, p10, p01);
    }
    M += row;
  }
  return 0.5 * (M + M.transpose());
}

EllipsoidFit fit_ellipsoid(const Mat3& moments, double min_gap) {
  const Mat3 sym = 0.5 * (moments + moments.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of the moment tensor failed");

  EllipsoidFit fit;
  for (int c = 0; c < 3; ++c) {
    fit.singular_values(c) = eig.eigenvalues()(2 - c);
    Vec3 axis = eig.eigenvectors().col(2 - c);
    int big = 0;
    axis.cwiseAbs().maxCoeff(&big);
    if (axis(big) < 0.0) axis = -axis;
    fit.rotation.col(c) = axis;
  }
  if (fit.rotation.determinant() < 0.0) fit.rotation.col(2) = -fit.rotation.col(2);

  const Vec3& s = fit.singular_values;
  const double scale = std::abs(s(0)) > 0.0 ? std::abs(s(0)) : 1.0;
  fit.gaps = {(s(0) - s(1)) / scale, (s(1) - s(2)) / scale};
  if (!(s(2) > 0.0)) throw NotTriaxial("moment tensor is not positive definite", fit.gaps);
  if (fit.gaps[0] < min_gap || fit.gaps[1] < min_gap) {
    throw NotTriaxial("approximating ellipsoid is not triaxial (relative axis gaps " + std::to_string(fit.gaps[0]) +
                          ", " + std::to_string(fit.gaps[1]) + ")",
                      fit.gaps);
  }
  const double det = s.prod();
  const double factor = std::pow(4.0 * std::numbers::pi / 15.0, 0.2) * std::pow(det, -0.1);
  fit.semi_axes = factor * fit.rotation * s.cwiseSqrt().asDiagonal() * fit.rotation.transpose();
  return fit;
}

const std::array<Vec3, 4>& axis_sign_hypotheses() {
  static const std::array<Vec3, 4> signs = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  return signs;
}

Surface normalize_scale_and_center(const Surface& s, double* volume, Vec3* center) {
  const VolumeCells cells = inscribed_volume(s);
  if (!(cells.total > 1e-12)) {
    throw ZeroVolume("inscribed volume " + std::to_string(cells.total) +
                     " is not positive; the surface is degenerate or inward oriented");
  }
  const double scale = 1.0 / std::cbrt(cells.total);
  const Surface scaled = transform(s, Mat3::Identity(), scale, Vec3::Zero());
  const Vec3 c = center_of_mass(scaled, inscribed_volume(scaled));
  if (volume) *volume = cells.total;
  if (center) *center = c;
  return transform(scaled, Mat3::Identity(), 1.0, c);
}

namespace {

AlignedPair align_impl(const Surface& s1, const Surface& s2, const AlignOptions& opts, bool allow_fallback) {
  if (!(s1.shape() == s2.shape())) throw NonUniformGrid("surfaces to align have different grids", 1);
  AlignedPair out;
  AlignmentReport& rep = out.report;
  const Surface f1 = normalize_scale_and_center(s1, &rep.vol1, &rep.center1);
  const Surface f2 = normalize_scale_and_center(s2, &rep.vol2, &rep.center2);

  EllipsoidFit e1, e2;
  try {
    e1 = fit_ellipsoid(second_moments(f1, inscribed_volume(f1)), opts.min_gap);
    e2 = fit_ellipsoid(second_moments(f2, inscribed_volume(f2)), opts.min_gap);
  } catch (const NotTriaxial&) {
    if (!allow_fallback) throw;
    out.first = f1;
    out.second = f2;
    rep.rotated = false;
    rep.hypothesis = -1;
    return out;
  }
  rep.U1 = e1.rotation;
  rep.U2 = e2.rotation;
  rep.gaps1 = e1.gaps;
  rep.gaps2 = e2.gaps;

  const auto& signs = axis_sign_hypotheses();
  std::array<Surface, 4> candidates;
  for (int h = 0; h < 4; ++h) {
    const Mat3 rot = e1.rotation * signs[h].asDiagonal() * e2.rotation.transpose();
    candidates[h] = transform(f2, rot, 1.0, Vec3::Zero());
    Path pair;
    pair.frames = {f1, candidates[h]};
    try {
      rep.hypothesis_energies[h] = path_energy(pair, opts.params, opts.margin, Evaluator::TRIANGLE, opts.energy).total;
    } catch (const NumericalError&) {
      rep.hypothesis_energies[h] = std::numeric_limits<double>::infinity();
    }
  }
  int best = 0;
  for (int h = 1; h < 4; ++h) {
    if (rep.hypothesis_energies[h] < rep.hypothesis_energies[best]) best = h;
  }
  double runner_up = std::numeric_limits<double>::infinity();
  for (int h = 0; h < 4; ++h) {
    if (h != best) runner_up = std::min(runner_up, rep.hypothesis_energies[h]);
  }
  rep.hypothesis = best;
  rep.tie_gap = runner_up - rep.hypothesis_energies[best];
  out.first = f1;
  out.second = candidates[best];
  return out;
}

}  // namespace

AlignedPair align_pair(const Surface& s1, const Surface& s2, const AlignOptions& opts) {
  return align_impl(s1, s2, opts, false);
}

AlignedPair align_pair_or_normalize(const Surface& s1, const Surface& s2, const AlignOptions& opts) {
  return align_impl(s1, s2, opts, true);
}

}  // namespace elastica
