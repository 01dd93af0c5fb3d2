#include "elastica/harmonics.h"

#include "elastica/errors.h"

#include <cmath>
#include <numbers>

namespace elastica {

namespace {

std::size_t tri(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }

}  // namespace

std::vector<double> normalized_legendre(int lmax, double u) {
  const double x = std::cos(u);
  const double s = std::sin(u);
  std::vector<double> p(tri(lmax, lmax) + 1, 0.0);

  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[tri(m, m)] = pmm;
    if (m + 1 <= lmax) p[tri(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = static_cast<double>(l) * l, mm = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[tri(l, m)] = a * (x * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
    }
  }
  return p;
}

double real_harmonic(int l, int m, double u, double v) {
  if (l < 0 || std::abs(m) > l) throw ValidationError("harmonic order out of range");
  const std::vector<double> p = normalized_legendre(l, u);
  const int am = std::abs(m);
  const double base = p[tri(l, am)];
  if (m == 0) return base;
  return std::numbers::sqrt2 * base * (m > 0 ? std::cos(am * v) : std::sin(am * v));
}

std::vector<HarmonicIndex> harmonic_indices(int degree) {
  std::vector<HarmonicIndex> out;
  for (int l = 0; l <= degree; ++l) {
    for (int m = -l; m <= l; ++m) out.push_back({l, m});
  }
  return out;
}

std::vector<ScalarField> real_harmonics(int degree, const GridShape& grid) {
  if (degree < 0) throw ValidationError("harmonic degree must be non-negative");
  const std::vector<HarmonicIndex> idx = harmonic_indices(degree);
  std::vector<ScalarField> out(idx.size(), ScalarField(grid));

  std::vector<double> cosines(static_cast<std::size_t>(degree + 1) * grid.nv);
  std::vector<double> sines(cosines.size());
  for (int m = 0; m <= degree; ++m) {
    for (int j = 0; j < grid.nv; ++j) {
      cosines[static_cast<std::size_t>(m) * grid.nv + j] = std::cos(m * grid.v(j));
      sines[static_cast<std::size_t>(m) * grid.nv + j] = std::sin(m * grid.v(j));
    }
  }
  for (int i = 0; i < grid.nu; ++i) {
    const std::vector<double> p = normalized_legendre(degree, grid.u(i));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int l = idx[k].l, m = idx[k].m, am = std::abs(m);
      const double base = p[tri(l, am)];
      for (int j = 0; j < grid.nv; ++j) {
        double val = base;
        if (m > 0) val *= std::numbers::sqrt2 * cosines[static_cast<std::size_t>(am) * grid.nv + j];
        if (m < 0) val *= std::numbers::sqrt2 * sines[static_cast<std::size_t>(am) * grid.nv + j];
        out[k](i, j) = val;
      }
    }
  }
  return out;
}

ScalarField sphere_quadrature_weights(const GridShape& grid) {
  // Clenshaw-Curtis weights for x_i = cos(pi i / N), N = nu - 1.
  const int N = grid.nu - 1;
  std::vector<double> w(grid.nu);
  for (int i = 0; i <= N; ++i) {
    const double theta = std::numbers::pi * i / N;
    double sum = 0.0;
    for (int k = 1; 2 * k <= N; ++k) {
      const double bk = (2 * k == N) ? 1.0 : 2.0;
      sum += bk / (4.0 * k * k - 1.0) * std::cos(2.0 * k * theta);
    }
    const double c = (i == 0 || i == N) ? 1.0 : 2.0;
    w[i] = c / N * (1.0 - sum);
  }
  ScalarField out(grid);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) out(i, j) = w[i] * grid.dv();
  }
  return out;
}

}  // namespace elastica
