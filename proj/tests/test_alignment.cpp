#include "elastica/alignment.h"
#include "elastica/errors.h"
#include "elastica/shapes.h"
#include "helpers.h"
#include "oracles/oracle_values.h"

#include <Eigen/Geometry>
#include <doctest.h>

#include <numbers>

using namespace elastica;
using testing::rel;

namespace {

Surface transform(const Surface& s, const Mat3& R, double scale, const Vec3& shift) {
  VectorField pts = s.points();
  for (Vec3& p : pts) p = scale * (R * p) + shift;
  return Surface(pts);
}

Mat3 rotation(double angle, const Vec3& axis) { return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(); }

double axis_angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::min(1.0, std::abs(a.normalized().dot(b.normalized())))) * 180 / std::numbers::pi;
}

}  // namespace

TEST_SUITE("alignment") {
  TEST_CASE("volumes") {
    const double unit = inscribed_volume(testing::sphere(1, 100)).total;
    CHECK(rel(unit, oracle::kUnitBallVolume) < 0.005);
    CHECK(rel(inscribed_volume(testing::ellipsoid(2, 1, 0.5, 100)).total, oracle::kEllipsoid2_1_05Volume) < 0.005);
    // Rigid motions do not change the volume.
    const Surface moved = transform(testing::ellipsoid(2, 1, 0.5, 40), rotation(0.7, Vec3(1, 2, 3)), 1, Vec3(3, -2, 5));
    CHECK(rel(inscribed_volume(moved).total, inscribed_volume(testing::ellipsoid(2, 1, 0.5, 40)).total) < 1e-10);
  }

  TEST_CASE("centroid of a lopsided solid") {
    const Surface s = generate(ShapeRecipe{BumpSphere{1, 0.3, 1, 0}}, GridShape{100, 100});
    const Vec3 c = center_of_mass(s, inscribed_volume(s));
    CHECK(rel(c.z(), oracle::kTiltedBumpCentroidZ) < 0.01);
    CHECK(std::abs(c.x()) < 1e-10);
    CHECK(std::abs(c.y()) < 1e-10);
  }

  TEST_CASE("centroid follows a translation") {
    const Surface s = transform(testing::ellipsoid(1.5, 1, 0.6, 40), Mat3::Identity(), 1, Vec3(1, 2, -3));
    CHECK((center_of_mass(s, inscribed_volume(s)) - Vec3(1, 2, -3)).norm() < 1e-10);
  }

  TEST_CASE("second moments of the unit ball") {
    const Surface s = testing::sphere(1, 100);
    const Mat3 M = second_moments(s, inscribed_volume(s));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(M(r, c) - (r == c ? oracle::kUnitBallMoment : 0.0)) < 0.01 * oracle::kUnitBallMoment);
      }
    }
  }

  TEST_CASE("ellipsoid moments scale with the squared semi-axes") {
    const Surface s = testing::ellipsoid(2, 1, 1, 100);
    const EllipsoidFit fit = fit_ellipsoid(second_moments(s, inscribed_volume(s)), 0.0);
    CHECK(rel(fit.singular_values(0) / fit.singular_values(1), 4.0) < 0.02);
    CHECK(rel(fit.singular_values(0) / fit.singular_values(2), 4.0) < 0.02);
    CHECK(axis_angle_deg(fit.rotation.col(0), Vec3::UnitX()) < 0.1);
  }

  TEST_CASE("ellipsoid fit is a proper rotation with sign-fixed columns") {
    const Mat3 R = rotation(1.1, Vec3(-1, 0.3, 0.8));
    const Mat3 M = R * Vec3(3, 2, 1).asDiagonal() * R.transpose();
    const EllipsoidFit fit = fit_ellipsoid(M);
    CHECK(fit.rotation.determinant() == doctest::Approx(1.0));
    CHECK((fit.rotation.transpose() * fit.rotation - Mat3::Identity()).norm() < 1e-12);
    CHECK(fit.singular_values(0) == doctest::Approx(3.0));
    CHECK(fit.singular_values(2) == doctest::Approx(1.0));
    CHECK(fit.gaps[0] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(fit_ellipsoid(Mat3::Identity()), NotTriaxial);
    CHECK_THROWS_AS(fit_ellipsoid(Vec3(1, -1, 0.5).asDiagonal().toDenseMatrix()), NotTriaxial);
  }

  TEST_CASE("exact recovery of a rotated, translated, scaled ellipsoid") {
    const Surface s1 = testing::ellipsoid(1.8, 1.2, 0.7, 40);
    const Surface s2 = transform(s1, rotation(2.3, Vec3(0.4, -1.0, 0.6)), 1.7, Vec3(-3, 0.5, 2));
    const AlignedPair a = align_pair(s1, s2);
    double worst = 0;
    for (std::size_t q = 0; q < s1.points().size(); ++q) {
      worst = std::max(worst, (a.first.points()[q] - a.second.points()[q]).norm());
    }
    CHECK(worst < 1e-6);
    CHECK(a.report.rotated);
    CHECK(rel(a.report.vol2 / a.report.vol1, std::pow(1.7, 3)) < 1e-9);
    CHECK(rel(inscribed_volume(a.first).total, 1.0) < 1e-10);
    CHECK(center_of_mass(a.second, inscribed_volume(a.second)).norm() < 1e-10);
  }

  TEST_CASE("distinct triaxial ellipsoids end up co-aligned") {
    const Surface s1 = testing::ellipsoid(2.0, 1.3, 0.8, 50);
    const Surface s2 = transform(testing::ellipsoid(1.6, 1.1, 0.5, 50), rotation(0.9, Vec3(1, 1, 0)), 1, Vec3(1, 0, 0));
    const AlignedPair a = align_pair(s1, s2);
    const EllipsoidFit f1 = fit_ellipsoid(second_moments(a.first, inscribed_volume(a.first)));
    const EllipsoidFit f2 = fit_ellipsoid(second_moments(a.second, inscribed_volume(a.second)));
    for (int c = 0; c < 3; ++c) CHECK(axis_angle_deg(f1.rotation.col(c), f2.rotation.col(c)) < 0.5);
  }

  TEST_CASE("four sign hypotheses, all proper") {
    const auto& h = axis_sign_hypotheses();
    CHECK(h[0] == Vec3(1, 1, 1));
    for (const Vec3& d : h) CHECK(d.prod() == 1.0);
  }

  TEST_CASE("spheres are not triaxial; the fallback only normalizes") {
    const Surface a = testing::sphere(1, 30), b = testing::sphere(2, 30);
    CHECK_THROWS_AS(align_pair(a, b), NotTriaxial);
    const AlignedPair p = align_pair_or_normalize(a, b);
    CHECK_FALSE(p.report.rotated);
    for (std::size_t q = 0; q < a.points().size(); ++q) CHECK((p.first.points()[q] - p.second.points()[q]).norm() < 1e-10);
  }

  TEST_CASE("flat surface has zero volume") {
    VectorField pts = testing::sphere(1, 20).points();
    for (Vec3& p : pts) p.z() = 0;
    CHECK_THROWS_AS(normalize_scale_and_center(Surface(pts)), ZeroVolume);
  }
}
