#pragma once

#include "elastica/grid.h"

#include <vector>

namespace elastica {

// Real orthonormal spherical harmonic Y_l^m on the unit sphere, polar angle u
// and azimuth v. m > 0 uses cos(m v), m < 0 uses sin(|m| v); no
// Condon-Shortley phase.
double real_harmonic(int l, int m, double u, double v);

// Fully normalized associated Legendre values P(l, m) for 0 <= m <= l <= lmax
// at x = cos u, stored at index l*(l+1)/2 + m. Includes the 1/sqrt(4 pi)
// factor, so Y_l^0 = P(l, 0).
std::vector<double> normalized_legendre(int lmax, double u);

struct HarmonicIndex {
  int l = 0;
  int m = 0;
};

// (l, m) for 0 <= l <= degree, -l <= m <= l, in that order.
std::vector<HarmonicIndex> harmonic_indices(int degree);

// Every harmonic of degree <= N sampled on the grid, ordered as harmonic_indices(N).
std::vector<ScalarField> real_harmonics(int degree, const GridShape& grid);

// Quadrature weights for integrals over the unit sphere: Clenshaw-Curtis in
// cos u times the uniform rule in v. Exact for spherical polynomials whose
// degree in cos u stays below nu and whose azimuthal order stays below nv / 2.
ScalarField sphere_quadrature_weights(const GridShape& grid);

}  // namespace elastica
