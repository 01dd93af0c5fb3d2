// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is the number of failures.
#include "elastica/alignment.h"
#include "elastica/basis.h"
#include "elastica/metric.h"
#include "elastica/shapes.h"
#include "elastica/straighten.h"
#include "oracles/oracle_values.h"

#include <Eigen/Geometry>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

using namespace elastica;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }
double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

Surface sphere(double r, int n) { return generate(ShapeRecipe{Sphere{r}}, GridShape{n, n}); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " exception: " << e.what();
  }
  std::printf("[%s] %d. %s (%.1fs)%s\n", out.pass ? "PASS" : "FAIL", id, title, seconds_since(t0),
              out.detail.str().c_str());
  std::fflush(stdout);
  failures += !out.pass;
}

const ElasticParams kSpheres{1.0, 0.125, 0.0};
const std::array<Evaluator, 4> kAll{Evaluator::I_II, Evaluator::K1K2, Evaluator::POLYFIT, Evaluator::TRIANGLE};

void sphere_path_energies(Outcome& out) {
  const double theory = theoretical_sphere_energy(1, 2.5, kSpheres);
  out.require(rel(theory, 254.4690) < 1e-6, "theory value");
  out.detail.precision(6);
  for (int n : {100, 200}) {
    const Path p = linear_path(sphere(1, n), sphere(2.5, n), 10);
    out.detail << " " << n << "x" << n << ":";
    for (Evaluator e : kAll) {
      const auto t0 = Clock::now();
      const double E = path_energy(p, kSpheres, {}, e).total;
      const double wall = seconds_since(t0);
      out.detail << " " << to_string(e) << "=" << E << " (" << std::setprecision(2) << wall << "s)"
                 << std::setprecision(6);
      const double tol = n == 200 ? 0.03 : (e == Evaluator::I_II ? 0.04 : 0.05);
      out.require(rel(E, theory) <= tol, to_string(e) + " at " + std::to_string(n));
      out.require(wall <= 60, to_string(e) + " runtime");
    }
  }
}

void gauge(Outcome& out) {
  const int n = 100, T = 10;
  const Path p = linear_path(sphere(1, n), sphere(2.5, n), T);
  const Path shifted = gauge_transform_path(p, std::vector<ReparamRecipe>(T, VShift{13}));
  const Path rotated = gauge_transform_path(p, returning_rotation_schedule(Vec3(1, 0.5, 0.3), 0.2, T));
  out.detail.precision(3);
  for (Evaluator e : kAll) {
    const double base = path_energy(p, kSpheres, {}, e).total;
    const double dv = rel(path_energy(shifted, kSpheres, {}, e).total, base);
    out.detail << " " << to_string(e) << ": vshift " << dv;
    out.require(dv < 1e-8, "v-shift " + to_string(e));
    if (e == Evaluator::K1K2 || e == Evaluator::TRIANGLE) {
      const double dr = rel(path_energy(rotated, kSpheres, {}, e).total, base);
      out.detail << ", rotation " << dr;
      out.require(dr < 0.03, "rotation " + to_string(e));
    }
  }
}

void same_shape(Outcome& out) {
  const int n = 80, T = 10;
  const GridShape g{n, n};
  const ShapeRecipe hand{BumpSphere{1.0, 0.15, 3, 2, Vec3(1.3, 1.0, 0.8)}};
  std::vector<ShapeRecipe> still(T, hand);
  const Path gauge_only = generate_path(still, T, g, rotation_schedule(Vec3(0.2, 1, 0.4), 0.3, T));
  const Path deforming = linear_path(generate(hand, g), generate(ShapeRecipe{Ellipsoid{Vec3(1.6, 0.9, 0.7)}}, g), T);
  const ElasticParams params{};
  const double e0 = path_energy(gauge_only, params, {}, Evaluator::TRIANGLE).total;
  const double e1 = path_energy(deforming, params, {}, Evaluator::TRIANGLE).total;
  out.detail << " reparameterized=" << e0 << " deforming=" << e1 << " ratio=" << e0 / e1;
  out.require(e0 < 0.01 * e1, "ratio below 1%");
}

void collapse(Outcome& out) {
  const GridShape g{24, 24};
  const Surface start = generate(ShapeRecipe{Sphere{1.0}}, g);
  const Surface middle = generate(ShapeRecipe{BumpSphere{1.0, 0.15, 3, 2, Vec3(1.4, 1.0, 0.8)}}, g);
  const Surface end = generate(ShapeRecipe{Sphere{1.0}}, g, SphereRotation{Vec3(1, 1, 1), 0.3});
  SolverConfig cfg;
  cfg.basis = {5, 4, 0};
  cfg.max_iter = 150;
  const DeformationBasis basis = build_basis(cfg.basis, g);
  const StraightenResult r = straighten(piecewise_linear_path({start, middle, end}, cfg.frames), basis, cfg);
  const double drop = 1 - r.trace.final_energy / r.trace.initial_energy;
  out.detail << " elements=" << basis.size() << " iterations=" << r.trace.iterations.size()
             << " E0=" << r.trace.initial_energy << " E=" << r.trace.final_energy << " decrease=" << 100 * drop << "%";
  out.require(basis.size() == 432, "432 elements");
  out.require(static_cast<int>(r.trace.iterations.size()) <= 800, "iteration budget");
  out.require(drop >= 0.95, "95% decrease");
}

// Worst relative curvature error over the band pi/6 <= u <= 5 pi/6, which
// stays fixed under refinement.
std::pair<double, double> curvature_errors(double R, int n) {
  const Surface s = sphere(R, n);
  const FundamentalForms d = second_form_direct(s);
  const FundamentalForms p = second_form_polyfit(s);
  double ed = 0, ep = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.shape().u(i);
    if (u < std::numbers::pi / 6 || u > 5 * std::numbers::pi / 6) continue;
    for (int j = 0; j < n; ++j) {
      ed = std::max({ed, rel(d.k1(i, j), 1 / R), rel(d.k2(i, j), 1 / R)});
      ep = std::max({ep, rel(p.k1(i, j), 1 / R), rel(p.k2(i, j), 1 / R)});
    }
  }
  return {ed, ep};
}

void curvature(Outcome& out) {
  out.detail.precision(3);
  for (double R : {1.0, 2.5}) {
    const Surface s = sphere(R, 100);
    const FundamentalForms d = second_form_direct(s);
    const FundamentalForms p = second_form_polyfit(s);
    double wd = 0, wp = 0;
    for (int i = 3; i <= 96; ++i) {
      for (int j = 0; j < 100; ++j) {
        wd = std::max({wd, rel(d.k1(i, j), 1 / R), rel(d.k2(i, j), 1 / R)});
        wp = std::max({wp, rel(p.k1(i, j), 1 / R), rel(p.k2(i, j), 1 / R)});
      }
    }
    out.detail << " R=" << R << ": direct " << wd << ", polyfit " << wp;
    out.require(wd < 0.01 && wp < 0.01, "1% at R=" + std::to_string(R));
  }
  // The observed order of a second-order stencil reaches 2 from below as h
  // shrinks (1.95, 1.97, 1.99 over successive doublings), so the check
  // allows 0.05 of pre-asymptotic slack on the finest pair we can afford.
  const auto [dc, pc] = curvature_errors(1.0, 97);
  const auto [df, pf] = curvature_errors(1.0, 193);
  const double od = std::log2(dc / df), op = std::log2(pc / pf);
  out.detail.precision(4);
  out.detail << "; order 97->193 direct " << od << ", polyfit " << op;
  out.require(od >= 1.95 && op >= 1.95, "second order");
}

void alignment(Outcome& out) {
  const GridShape g{40, 40};
  const Surface s1 = generate(ShapeRecipe{Ellipsoid{Vec3(1.8, 1.2, 0.7)}}, g);
  const Mat3 R = Eigen::AngleAxisd(2.1, Vec3(0.3, -0.8, 0.5).normalized()).toRotationMatrix() *
                 Eigen::AngleAxisd(0.7, Vec3::UnitX()).toRotationMatrix();
  VectorField moved = s1.points();
  for (Vec3& p : moved) p = 0.6 * (R * p) + Vec3(2.5, -1.0, 4.0);
  const AlignedPair a = align_pair(s1, Surface(moved));
  double worst = 0;
  for (std::size_t q = 0; q < g.size(); ++q) worst = std::max(worst, (a.first.points()[q] - a.second.points()[q]).norm());
  const Surface ball = sphere(1, 100);
  const Mat3 M = second_moments(ball, inscribed_volume(ball));
  const double moment_err = (M - oracle::kUnitBallMoment * Mat3::Identity()).cwiseAbs().maxCoeff() / oracle::kUnitBallMoment;
  out.detail << " pointwise=" << worst << " hypothesis=" << a.report.hypothesis << " moment error=" << moment_err;
  out.require(worst < 1e-6, "pointwise recovery");
  out.require(moment_err < 0.01, "unit ball moments");
}

void geometry(Outcome& out) {
  const Surface s = sphere(1, 100);
  const double vol = inscribed_volume(s).total;
  const FundamentalForms f = second_form_direct(s);
  const double gb = integrate_scalar(f, f.K);
  TangentField df(s.shape());
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) df(i, j) = Vec3(std::cos(0.1 * i * j), std::sin(0.3 * i), 1.0 + 0.01 * j);
  }
  const Decomposition d = decompose(f.normal, df);
  const Decomposition again = decompose(f.normal, d.normal);
  const Decomposition tang = decompose(f.normal, d.tangential);
  double ortho = 0, idem = 0;
  for (std::size_t q = 0; q < df.size(); ++q) {
    ortho = std::max(ortho, std::abs(d.tangential[q].dot(d.normal[q])));
    idem = std::max({idem, (again.normal[q] - d.normal[q]).norm(), tang.normal[q].norm(),
                     (d.normal[q] + d.tangential[q] - df[q]).norm()});
  }
  out.detail << " volume error=" << rel(vol, oracle::kUnitBallVolume) << " Gauss-Bonnet=" << gb
             << " (capped exact " << oracle::kGaussBonnetCapped << ") orthogonality=" << ortho << " idempotence=" << idem;
  out.require(rel(vol, oracle::kUnitBallVolume) < 0.005, "volume");
  out.require(rel(gb, oracle::kGaussBonnetCapped) < 0.03, "Gauss-Bonnet");
  out.require(ortho < 1e-12 && idem < 1e-12, "decomposition");
}

void basis_counts(Outcome& out) {
  const GridShape g{24, 24};
  const Surface f1 = generate(ShapeRecipe{Ellipsoid{Vec3(1.3, 1.0, 0.8)}}, g);
  const Surface f2 = generate(ShapeRecipe{BumpSphere{1.0, 0.12, 3, 2}}, g);
  const Surface f3 = generate(ShapeRecipe{BumpSphere{1.0, 0.15, 2, 1, Vec3(0.8, 1.2, 1.1)}}, g);
  double previous = std::numeric_limits<double>::infinity();
  for (const HarmonicSpec& spec : {HarmonicSpec{5, 4, 52}, HarmonicSpec{5, 4, 0}, HarmonicSpec{11, 4, 0}}) {
    SolverConfig cfg;
    cfg.basis = spec;
    cfg.frames = 5;
    cfg.max_iter = 60;
    const DeformationBasis basis = build_basis(spec, g);
    const StraightenResult r = straighten(piecewise_linear_path({f1, f3, f2}, cfg.frames), basis, cfg);
    out.detail << " " << basis.size() << "(N=" << spec.degree << ",J=" << spec.time_modes << "): " << r.trace.final_energy;
    out.require(r.trace.final_energy <= previous + 1e-6, "monotone at " + std::to_string(basis.size()));
    previous = r.trace.final_energy;
  }
}

void distance_matrix_sanity(Outcome& out) {
  const GridShape g{20, 20};
  const std::vector<std::string> names{"sphere", "near-sphere", "ellipsoid", "bump-sphere"};
  const std::vector<Surface> shapes{generate(ShapeRecipe{Sphere{1.0}}, g),
                                    generate(ShapeRecipe{Ellipsoid{Vec3(1.06, 1.0, 0.95)}}, g),
                                    generate(ShapeRecipe{Ellipsoid{Vec3(1.6, 1.0, 0.7)}}, g),
                                    generate(ShapeRecipe{BumpSphere{1.0, 0.15, 3, 2, Vec3(1.3, 1.0, 0.85)}}, g)};
  // The bump is stretched so its fitted ellipsoid is clearly triaxial; a bare
  // Y_3^2 bump has ~1% axis gaps and gets rotated with its poles onto the
  // equator. Velocities sit on the left frame, so the direction bias is
  // first order in dt and needs the finer time grid.
  SolverConfig cfg;
  cfg.basis = {2, 3, 0};
  cfg.frames = 21;
  cfg.max_iter = 20;
  const DistanceMatrix m = distance_matrix(shapes, cfg);
  const Eigen::MatrixXd& d = m.distances;
  double asym = 0, diag = 0;
  for (int i = 0; i < 4; ++i) {
    diag = std::max(diag, std::abs(d(i, i)));
    for (int j = i + 1; j < 4; ++j) asym = std::max(asym, std::abs(d(i, j) - d(j, i)) / (0.5 * (d(i, j) + d(j, i))));
  }
  auto nearest = [&](int i) {
    int best = -1;
    for (int j = 0; j < 4; ++j) {
      if (j != i && (best < 0 || d(i, j) < d(i, best))) best = j;
    }
    return best;
  };
  out.detail.precision(4);
  out.detail << " max asymmetry=" << 100 * asym << "% max diagonal=" << diag << " nearest(sphere)="
             << names[nearest(0)] << " nearest(near-sphere)=" << names[nearest(1)];
  out.require(asym <= 0.02, "symmetry");
  out.require(diag <= 1e-3, "zero diagonal");
  out.require(nearest(0) == 1 && nearest(1) == 0, "nearest neighbours");
}

}  // namespace

int main() {
  criterion(1, "energies of the concentric-spheres path", sphere_path_energies);
  criterion(2, "gauge invariance of the path energy", gauge);
  criterion(3, "same-shape path has near-zero energy", same_shape);
  criterion(4, "path straightening collapses a detour", collapse);
  criterion(5, "curvature accuracy and convergence order", curvature);
  criterion(6, "alignment recovery and unit-ball moments", alignment);
  criterion(7, "volume, Gauss-Bonnet and decomposition oracles", geometry);
  criterion(8, "final energy non-increasing in the basis size", basis_counts);
  criterion(9, "distance matrix sanity", distance_matrix_sanity);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
