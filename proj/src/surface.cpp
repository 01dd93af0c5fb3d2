#include "elastica/surface.h"

#include "elastica/errors.h"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace elastica {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
GridField<T> d_du(const GridField<T>& f) {
  const GridShape& g = f.shape();
  const double inv2 = 1.0 / (2.0 * g.du());
  GridField<T> out(g);
  const int n = g.nu;
  for (int j = 0; j < g.nv; ++j) {
    out(0, j) = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) * inv2;
    for (int i = 1; i < n - 1; ++i) out(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv2;
    out(n - 1, j) = (3.0 * f(n - 1, j) - 4.0 * f(n - 2, j) + f(n - 3, j)) * inv2;
  }
  return out;
}

template <typename T>
GridField<T> d_dv(const GridField<T>& f) {
  const GridShape& g = f.shape();
  const double inv2 = 1.0 / (2.0 * g.dv());
  GridField<T> out(g);
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      out(i, j) = (f.wrapped(i, j + 1) - f.wrapped(i, j - 1)) * inv2;
    }
  }
  return out;
}

// Orthonormal completion of a unit vector.
void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = (seed - seed.dot(n) * n).normalized();
  t2 = n.cross(t1);
}

Vec3 pole_normal(const VectorField& f, bool north) {
  const GridShape& g = f.shape();
  const int pole = north ? 0 : g.nu - 1;
  const int ring = north ? 1 : g.nu - 2;
  Vec3 centre = Vec3::Zero();
  for (int j = 0; j < g.nv; ++j) centre += f(pole, j);
  centre /= g.nv;
  Vec3 sum = Vec3::Zero();
  for (int j = 0; j < g.nv; ++j) {
    sum += (f(ring, j) - centre).cross(f.wrapped(ring, j + 1) - centre);
  }
  if (!north) sum = -sum;
  const double len = sum.norm();
  return len > 0.0 ? Vec3(sum / len) : Vec3(kNaN, kNaN, kNaN);
}

void fill_curvatures_from_forms(FundamentalForms& ff, int row_lo, int row_hi) {
  const GridShape& g = ff.E.shape();
  for (int i = row_lo; i <= row_hi; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const double E = ff.E(i, j), F = ff.F(i, j), G = ff.G(i, j);
      const double e = ff.e(i, j), f = ff.f(i, j), gg = ff.g(i, j);
      const double det = E * G - F * F;
      const double K = (e * gg - f * f) / det;
      const double H = 0.5 * (e * G + gg * E - 2.0 * f * F) / det;
      // H^2 - K is a discriminant and cannot be negative except by rounding.
      const double rad = std::sqrt(std::max(H * H - K, 0.0));
      ff.K(i, j) = K;
      ff.H(i, j) = H;
      ff.k1(i, j) = H + rad;
      ff.k2(i, j) = H - rad;
    }
  }
}

}  // namespace

Surface::Surface(VectorField points) : points_(std::move(points)) {
  const GridShape& g = points_.shape();
  if (g.nu < 8 || g.nv < 8) {
    throw ValidationError("surface grid must be at least 8x8, got " + std::to_string(g.nu) + "x" +
                          std::to_string(g.nv));
  }
  if (points_.size() != g.size()) throw ValidationError("surface point count does not match its grid");
  for (const Vec3& p : points_) {
    if (!p.allFinite()) throw ValidationError("surface has non-finite coordinates");
  }
}

Partials partials(const VectorField& f) { return {d_du(f), d_dv(f)}; }

SecondPartials second_partials(const VectorField& f) {
  const GridShape& g = f.shape();
  const double iu2 = 1.0 / (g.du() * g.du());
  const double iv2 = 1.0 / (g.dv() * g.dv());
  const int n = g.nu;
  SecondPartials out{TangentField(g), d_dv(d_du(f)), TangentField(g)};
  for (int j = 0; j < g.nv; ++j) {
    out.fuu(0, j) = (2.0 * f(0, j) - 5.0 * f(1, j) + 4.0 * f(2, j) - f(3, j)) * iu2;
    for (int i = 1; i < n - 1; ++i) out.fuu(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) * iu2;
    out.fuu(n - 1, j) = (2.0 * f(n - 1, j) - 5.0 * f(n - 2, j) + 4.0 * f(n - 3, j) - f(n - 4, j)) * iu2;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      out.fvv(i, j) = (f.wrapped(i, j + 1) - 2.0 * f(i, j) + f.wrapped(i, j - 1)) * iv2;
    }
  }
  return out;
}

std::pair<ScalarField, ScalarField> scalar_partials(const ScalarField& h) { return {d_du(h), d_dv(h)}; }

bool is_immersed(const Surface& s, double eps, int* bad_row, int* bad_col) {
  const Partials d = partials(s);
  const GridShape& g = s.shape();
  for (int i = 1; i < g.nu - 1; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      if (!(d.fu(i, j).cross(d.fv(i, j)).norm() > eps)) {
        if (bad_row) *bad_row = i;
        if (bad_col) *bad_col = j;
        return false;
      }
    }
  }
  return true;
}

FundamentalForms first_form(const Surface& s, double eps) {
  const GridShape& g = s.shape();
  const Partials d = partials(s);
  FundamentalForms ff;
  ff.E = ScalarField(g);
  ff.F = ScalarField(g);
  ff.G = ScalarField(g);
  ff.area = ScalarField(g);
  ff.normal = VectorField(g);
  for (ScalarField* field : {&ff.e, &ff.f, &ff.g, &ff.K, &ff.H, &ff.k1, &ff.k2}) *field = ScalarField(g, kNaN);

  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& fu = d.fu(i, j);
      const Vec3& fv = d.fv(i, j);
      const double E = fu.dot(fu), F = fu.dot(fv), G = fv.dot(fv);
      ff.E(i, j) = E;
      ff.F(i, j) = F;
      ff.G(i, j) = G;
      const bool pole = (i == 0 || i == g.nu - 1);
      const double det = E * G - F * F;
      if (!pole) {
        if (!(det > eps * eps)) throw DegenerateMetric(i, j);
        const Vec3 c = fu.cross(fv);
        const double len = c.norm();
        ff.area(i, j) = len;
        ff.normal(i, j) = c / len;
      } else {
        ff.area(i, j) = std::sqrt(std::max(det, 0.0));
      }
    }
  }
  const Vec3 north = pole_normal(s.points(), true);
  const Vec3 south = pole_normal(s.points(), false);
  for (int j = 0; j < g.nv; ++j) {
    ff.normal(0, j) = north;
    ff.normal(g.nu - 1, j) = south;
  }
  return ff;
}

FundamentalForms second_form_direct(const Surface& s, double eps) {
  FundamentalForms ff = first_form(s, eps);
  const GridShape& g = s.shape();
  const SecondPartials d2 = second_partials(s.points());
  for (int i = 1; i < g.nu - 1; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& n = ff.normal(i, j);
      ff.e(i, j) = -d2.fuu(i, j).dot(n);
      ff.f(i, j) = -d2.fuv(i, j).dot(n);
      ff.g(i, j) = -d2.fvv(i, j).dot(n);
    }
  }
  fill_curvatures_from_forms(ff, 1, g.nu - 2);
  ff.has_curvature = true;
  return ff;
}

VectorField facet_normals(const Surface& s) {
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  VectorField out(g);
  for (int i = 1; i < g.nu - 1; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& p = f(i, j);
      const Vec3 ring[4] = {f(i + 1, j) - p, f.wrapped(i, j + 1) - p, f(i - 1, j) - p, f.wrapped(i, j - 1) - p};
      Vec3 sum = Vec3::Zero();
      for (int q = 0; q < 4; ++q) sum += ring[q].cross(ring[(q + 1) % 4]);
      const double len = sum.norm();
      out(i, j) = len > 0.0 ? Vec3(sum / len) : Vec3(kNaN, kNaN, kNaN);
    }
  }
  const Vec3 north = pole_normal(f, true);
  const Vec3 south = pole_normal(f, false);
  for (int j = 0; j < g.nv; ++j) {
    out(0, j) = north;
    out(g.nu - 1, j) = south;
  }
  return out;
}

FundamentalForms second_form_polyfit(const Surface& s, int k, PoleMargin margin, double eps) {
  if (k < 2) throw ValidationError("polynomial-fit neighbourhood radius must be at least 2");
  FundamentalForms ff = first_form(s, eps);
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  const VectorField normals = facet_normals(s);
  const bool reflect = (g.nv % 2 == 0);

  using Mat6 = Eigen::Matrix<double, 6, 6>;
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  const int side = 2 * k + 1;
  std::vector<Vec3> local(static_cast<std::size_t>(side) * side);

  const int lo = std::max(margin.first_row(), 1);
  const int hi = std::min(margin.last_row(g), g.nu - 2);
  for (int i = lo; i <= hi; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& p = f(i, j);
      const Vec3& n = normals(i, j);
      Vec3 t1, t2;
      tangent_frame(n, t1, t2);

      // Rows past a pole continue on the far meridian when nv is even.
      std::size_t count = 0;
      double spread = 0.0;
      for (int di = -k; di <= k; ++di) {
        int ii = i + di;
        int shift = 0;
        if (ii < 0 || ii >= g.nu) {
          if (!reflect) continue;
          ii = ii < 0 ? -ii : 2 * (g.nu - 1) - ii;
          shift = g.nv / 2;
        }
        for (int dj = -k; dj <= k; ++dj) {
          const Vec3 q = f.wrapped(ii, j + dj + shift) - p;
          local[count] = Vec3(q.dot(t1), q.dot(t2), q.dot(n));
          spread += local[count].x() * local[count].x() + local[count].y() * local[count].y();
          ++count;
        }
      }
      const double scale = std::sqrt(spread / static_cast<double>(count));
      if (!(scale > 0.0)) throw SingularFit(i, j, std::numeric_limits<double>::infinity());

      // Normal equations of the quadric fit, in coordinates scaled by the
      // neighbourhood radius so the condition number is size independent.
      Mat6 normal_matrix = Mat6::Zero();
      Vec6 rhs = Vec6::Zero();
      for (std::size_t q = 0; q < count; ++q) {
        const double x = local[q].x() / scale, y = local[q].y() / scale, z = local[q].z() / scale;
        Vec6 b;
        b << x * x, y * y, x * y, x, y, 1.0;
        normal_matrix.noalias() += b * b.transpose();
        rhs += z * b;
      }
      Eigen::SelfAdjointEigenSolver<Mat6> eig(normal_matrix, Eigen::EigenvaluesOnly);
      const double lmin = eig.eigenvalues()(0), lmax = eig.eigenvalues()(5);
      const double condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
      if (condition > 1e12) throw SingularFit(i, j, condition);
      const Vec6 a = normal_matrix.ldlt().solve(rhs);

      const double a1 = a(0) / scale, a2 = a(1) / scale, a3 = a(2) / scale;
      // The outward normal is the fit's z axis; flip so convex is positive.
      const double H = -(a1 + a2);
      const double rad = std::sqrt((a1 - a2) * (a1 - a2) + a3 * a3);
      ff.K(i, j) = 4.0 * a1 * a2 - a3 * a3;
      ff.H(i, j) = H;
      ff.k1(i, j) = H + rad;
      ff.k2(i, j) = H - rad;
    }
  }
  ff.has_curvature = true;
  return ff;
}

Decomposition decompose(const VectorField& normals, const TangentField& df) {
  if (!(normals.shape() == df.shape())) throw ValidationError("perturbation grid does not match surface grid");
  Decomposition out{TangentField(df.shape()), TangentField(df.shape())};
  for (std::size_t k = 0; k < df.size(); ++k) {
    const Vec3& n = normals[k];
    out.normal[k] = df[k].dot(n) * n;
    out.tangential[k] = df[k] - out.normal[k];
  }
  return out;
}

Decomposition decompose(const Surface& s, const TangentField& df) {
  return decompose(first_form(s).normal, df);
}

double integrate_scalar(const FundamentalForms& forms, const ScalarField& phi, PoleMargin margin) {
  const GridShape& g = forms.area.shape();
  if (!(phi.shape() == g)) throw ValidationError("scalar field grid does not match surface grid");
  double total = 0.0;
  for (int i = margin.first_row(); i <= margin.last_row(g); ++i) {
    double row = 0.0;
    for (int j = 0; j < g.nv; ++j) row += phi(i, j) * forms.area(i, j);
    total += row;
  }
  return total * g.du() * g.dv();
}

double integrate_scalar(const Surface& s, const ScalarField& phi, PoleMargin margin) {
  return integrate_scalar(first_form(s), phi, margin);
}

}  // namespace elastica
