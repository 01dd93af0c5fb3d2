#pragma once

#include "elastica/grid.h"

#include <utility>

namespace elastica {

// A grid-sampled embedding of the sphere: points(i, j) = f(u_i, v_j).
class Surface {
 public:
  Surface() = default;
  // Throws ValidationError unless nu, nv >= 8 and every coordinate is finite.
  explicit Surface(VectorField points);
  Surface(GridShape shape, std::vector<Vec3> points) : Surface(VectorField(shape, std::move(points))) {}

  const GridShape& shape() const { return points_.shape(); }
  const VectorField& points() const { return points_; }
  const Vec3& operator()(int i, int j) const { return points_(i, j); }

 private:
  VectorField points_;
};

inline constexpr double kDefaultImmersionEps = 1e-10;

struct Partials {
  TangentField fu;
  TangentField fv;
};

struct SecondPartials {
  TangentField fuu;
  TangentField fuv;
  TangentField fvv;
};

// Second-order central differences; one-sided second-order stencils on the
// pole rows in u, periodic wrap in v.
Partials partials(const VectorField& f);
inline Partials partials(const Surface& s) { return partials(s.points()); }
SecondPartials second_partials(const VectorField& f);

// Same stencils applied to a scalar field.
std::pair<ScalarField, ScalarField> scalar_partials(const ScalarField& h);

// Per-node geometry. Pole rows carry E, F, G and a fan-averaged normal; the
// curvature entries there (and wherever an estimator skipped a node) are NaN.
struct FundamentalForms {
  ScalarField E, F, G;
  ScalarField e, f, g;
  ScalarField area;  // sqrt(EG - F^2)
  ScalarField K, H, k1, k2;
  VectorField normal;
  bool has_curvature = false;
};

// E, F, G, unit normal and area element. Throws DegenerateMetric when
// EG - F^2 <= eps^2 at a node off the pole rows.
FundamentalForms first_form(const Surface& s, double eps = kDefaultImmersionEps);

// Curvatures from the second fundamental form. Sign convention: curvature is
// positive where the surface bends away from its outward normal f_u x f_v, so
// a round sphere of radius R has k1 = k2 = 1/R.
FundamentalForms second_form_direct(const Surface& s, double eps = kDefaultImmersionEps);

// Curvatures from a least-squares quadric fitted to the (2k+1)^2 grid
// neighbourhood of each node in rows [m, nu-1-m], expressed in the tangent
// frame of the averaged facet normal. Throws SingularFit when the normal
// equations are numerically singular.
FundamentalForms second_form_polyfit(const Surface& s, int k = 2, PoleMargin margin = {},
                                     double eps = kDefaultImmersionEps);

// Area-weighted average of the four one-ring triangle normals at interior
// rows; fan average at the poles.
VectorField facet_normals(const Surface& s);

// Largest node (row, col) violating the immersion check, if any.
bool is_immersed(const Surface& s, double eps = kDefaultImmersionEps, int* bad_row = nullptr,
                 int* bad_col = nullptr);

struct Decomposition {
  TangentField tangential;
  TangentField normal;
};

// Split a perturbation into parts tangent and normal to the surface.
Decomposition decompose(const Surface& s, const TangentField& df);
Decomposition decompose(const VectorField& normals, const TangentField& df);

// Sum over rows [m, nu-1-m] of phi * sqrt(EG - F^2) * du * dv.
double integrate_scalar(const Surface& s, const ScalarField& phi, PoleMargin margin = {});
double integrate_scalar(const FundamentalForms& forms, const ScalarField& phi, PoleMargin margin = {});

}  // namespace elastica
