#include "elastica/errors.h"
#include "elastica/surface.h"
#include "helpers.h"
#include "oracles/oracle_values.h"
#include "oracles/polyfit_bias.h"

#include <doctest.h>

#include <numbers>

using namespace elastica;
using testing::rel;

TEST_SUITE("surface") {
  TEST_CASE("construction rejects tiny grids and non-finite points") {
    CHECK_THROWS_AS(Surface(VectorField(GridShape{6, 10}, Vec3::Zero())), ValidationError);
    VectorField pts = testing::sphere(1, 12).points();
    pts(4, 5).x() = std::nan("");
    CHECK_THROWS_AS(Surface{pts}, ValidationError);
  }

  TEST_CASE("area element of a radius 2 sphere") {
    const Surface s = testing::sphere(2, 100);
    const FundamentalForms f = first_form(s);
    double worst = 0;
    for (int i = 1; i < 99; ++i) {
      for (int j = 0; j < 100; j += 7) worst = std::max(worst, rel(f.area(i, j), 4 * std::sin(s.shape().u(i))));
    }
    CHECK(worst < 0.01);
    CHECK(4 * std::sin(1.0) == doctest::Approx(oracle::kSphere2AreaAtU1).epsilon(1e-12));
  }

  TEST_CASE("ellipsoid first form matches the symbolic oracle") {
    // u = pi/4 at row 25 of 101, v = pi/4 at column 12 of 96.
    const Surface s = testing::ellipsoid(2, 1, 1, 101, 96);
    const FundamentalForms f = first_form(s);
    CHECK(rel(f.E(25, 12), oracle::kEllipsoidE_pi4) < 0.01);
    CHECK(rel(f.F(25, 12), oracle::kEllipsoidF_pi4) < 0.01);
    CHECK(rel(f.G(25, 12), oracle::kEllipsoidG_pi4) < 0.01);
  }

  TEST_CASE("ellipsoid principal curvatures, both estimators") {
    const Surface s = testing::ellipsoid(2, 1, 1, 101, 96);
    for (const FundamentalForms& f : {second_form_direct(s), second_form_polyfit(s)}) {
      CHECK(rel(f.k1(50, 0), oracle::kEllipsoidK1_equator) < 0.02);
      CHECK(rel(f.k2(50, 0), oracle::kEllipsoidK2_equator) < 0.02);
      CHECK(rel(f.k1(25, 12), oracle::kEllipsoidK1_pi4) < 0.02);
      CHECK(rel(f.k2(25, 12), oracle::kEllipsoidK2_pi4) < 0.02);
    }
  }

  TEST_CASE("sphere curvature is 1/R with positive sign") {
    for (double R : {1.0, 2.5}) {
      const Surface s = testing::sphere(R, 100);
      const FundamentalForms d = second_form_direct(s);
      const FundamentalForms p = second_form_polyfit(s);
      double worst = 0;
      for (int i = 3; i <= 96; ++i) {
        for (int j = 0; j < 100; ++j) {
          for (double k : {d.k1(i, j), d.k2(i, j), p.k1(i, j), p.k2(i, j)}) worst = std::max(worst, rel(k, 1 / R));
        }
      }
      CHECK(worst < 0.01);
      CHECK(d.k1(1, 0) == doctest::Approx(1 / R).epsilon(0.05));
    }
  }

  TEST_CASE("polyfit bias on a lat-long neighbourhood matches the independent fit") {
    const Surface s = testing::sphere(1, 100);
    const FundamentalForms k2 = second_form_polyfit(s, 2);
    const FundamentalForms k3 = second_form_polyfit(s, 3);
    CHECK(k2.k1(49, 0) == doctest::Approx(oracle::kPolyfitK2Row49K1).epsilon(1e-4));
    CHECK(k2.k2(49, 0) == doctest::Approx(oracle::kPolyfitK2Row49K2).epsilon(1e-4));
    CHECK(k3.k1(49, 0) == doctest::Approx(oracle::kPolyfitK3Row49K1).epsilon(1e-4));
    CHECK(k3.k2(49, 0) == doctest::Approx(oracle::kPolyfitK3Row49K2).epsilon(1e-4));
    // The wider stencil is the biased one, hence radius 2 by default.
    CHECK(rel(k3.k1(49, 0), 1.0) > 0.01);
  }

  TEST_CASE("polyfit and direct curvatures agree on a bumpy sphere") {
    const Surface s = testing::bump(1, 0.05, 4, 2, 100);
    const FundamentalForms d = second_form_direct(s);
    const FundamentalForms p = second_form_polyfit(s);
    double num = 0, den = 0;
    for (int i = 3; i <= 96; ++i) {
      for (int j = 0; j < 100; ++j) {
        num += std::pow(d.k1(i, j) - p.k1(i, j), 2) + std::pow(d.k2(i, j) - p.k2(i, j), 2);
        den += std::pow(d.k1(i, j), 2) + std::pow(d.k2(i, j), 2);
      }
    }
    CHECK(std::sqrt(num / den) < 0.05);
  }

  TEST_CASE("curvature skipped inside the pole margin") {
    const FundamentalForms p = second_form_polyfit(testing::sphere(1, 30), 3, PoleMargin{4});
    CHECK(std::isnan(p.k1(2, 0)));
    CHECK(std::isfinite(p.k1(4, 0)));
  }

  TEST_CASE("decomposition of a constant field at the equator") {
    const Surface s = testing::sphere(1, 101, 96);
    const TangentField df(s.shape(), Vec3(1, 0, 0));
    const Decomposition d = decompose(s, df);
    CHECK((d.normal(50, 0) - Vec3(1, 0, 0)).norm() < 1e-3);
    CHECK(d.tangential(50, 0).norm() < 1e-3);
  }

  TEST_CASE("decomposition is orthogonal and idempotent") {
    const Surface s = testing::bump(1, 0.1, 3, 1, 40);
    TangentField df(s.shape());
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) df(i, j) = Vec3(std::sin(i * 0.3 + j), std::cos(0.2 * j), 0.5 * i / 40.0);
    }
    const FundamentalForms f = first_form(s);
    const Decomposition d = decompose(f.normal, df);
    const Decomposition again = decompose(f.normal, d.normal);
    double ortho = 0, idem = 0, sum = 0;
    for (std::size_t q = 0; q < df.size(); ++q) {
      ortho = std::max(ortho, std::abs(d.tangential[q].dot(f.normal[q])));
      idem = std::max(idem, (again.normal[q] - d.normal[q]).norm() + again.tangential[q].norm());
      sum = std::max(sum, (d.normal[q] + d.tangential[q] - df[q]).norm());
    }
    CHECK(ortho < 1e-12);
    CHECK(idem < 1e-12);
    CHECK(sum < 1e-12);
  }

  TEST_CASE("Gauss-Bonnet with the pole caps removed") {
    const Surface s = testing::sphere(1, 100);
    const FundamentalForms f = second_form_direct(s);
    const double total = integrate_scalar(f, f.K);
    CHECK(rel(total, oracle::kGaussBonnetCapped) < 0.03);
    CHECK(rel(total, 4 * std::numbers::pi) < 0.03);
  }

  TEST_CASE("collapsed interior row is a degenerate metric") {
    VectorField pts = testing::sphere(1, 20).points();
    for (int j = 0; j < 20; ++j) pts(7, j) = pts(7, 0);
    const Surface s(pts);
    CHECK_FALSE(is_immersed(s));
    try {
      first_form(s);
      FAIL("expected DegenerateMetric");
    } catch (const DegenerateMetric& e) {
      CHECK(e.row() == 7);
      CHECK(e.exit_code() == 3);
    }
    CHECK(is_immersed(testing::sphere(1, 20)));
  }

  TEST_CASE("partials of a linear field are exact") {
    const GridShape g{12, 16};
    VectorField f(g);
    for (int i = 0; i < g.nu; ++i) {
      for (int j = 0; j < g.nv; ++j) f(i, j) = Vec3(g.u(i), 2 * g.u(i), 0);
    }
    const Partials d = partials(f);
    for (std::size_t q = 0; q < f.size(); ++q) {
      CHECK((d.fu[q] - Vec3(1, 2, 0)).norm() < 1e-12);
      CHECK(d.fv[q].norm() < 1e-12);
    }
  }
}
