#pragma once

#include "elastica/grid.h"
#include "elastica/path.h"
#include "elastica/surface.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace elastica {

// Real harmonics of degree <= degree, three axis copies each, times
// time_modes profiles; max_elements > 0 keeps only the first elements in
// (l, m, axis, j) order.
struct HarmonicSpec {
  int degree = 5;
  int time_modes = 4;
  int max_elements = 0;

  int full_count() const { return 3 * (degree + 1) * (degree + 1) * time_modes; }
  int count() const { return max_elements > 0 && max_elements < full_count() ? max_elements : full_count(); }
  void validate() const;
};

// P_j(t) = sin(pi j t) / 4, exactly zero at t = 0 and t = 1.
double time_profile(int j, double t);

struct SpatialId {
  int l = 0;
  int m = 0;
  int axis = 0;
};

struct BasisElement {
  int spatial = 0;    // index into DeformationBasis::spatial
  int time_mode = 1;  // j >= 1
  SpatialId id;
};

struct DeformationBasis {
  GridShape grid;
  HarmonicSpec spec;
  std::vector<VectorField> spatial;  // H1-orthonormal
  std::vector<SpatialId> spatial_ids;
  std::vector<BasisElement> elements;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(elements.size()); }
};

// Discrete H1 product on the parameter sphere: sum over nodes of
// w (B1.B2 + B1_u.B2_u + B1_v.B2_v) with the sphere quadrature weights.
double h1_inner(const VectorField& a, const VectorField& b);

struct Orthonormalized {
  std::vector<VectorField> fields;
  std::vector<int> kept;     // input index of each output field
  std::vector<int> dropped;  // inputs whose residual fell below the tolerance
  std::vector<std::string> warnings;
};

// Modified Gram-Schmidt, two passes, under h1_inner. A field whose residual
// norm drops below tol times its own norm is rank deficient: it is dropped
// and a warning recorded.
Orthonormalized orthonormalize_h1(const std::vector<VectorField>& fields, double tol = 1e-10);

DeformationBasis build_basis(const HarmonicSpec& spec, const GridShape& grid);

// Adds eps * P_j(t_k) * B to every interior frame; endpoints stay untouched.
void perturb(Path& path, const DeformationBasis& basis, int element, double eps);

// Degree-N truncation of the coordinate functions, by quadrature projection.
Surface reconstruct(const Surface& s, int degree);

// Basis files: <root>/basis_N<deg>_J<modes>_<nu>x<nv>.gib plus a JSON
// manifest of the element ordering next to it.
std::filesystem::path basis_cache_file(const std::filesystem::path& root, const HarmonicSpec& spec,
                                       const GridShape& grid);
void save_basis(const DeformationBasis& basis, const std::filesystem::path& file);
std::optional<DeformationBasis> load_basis(const std::filesystem::path& file, const HarmonicSpec& spec,
                                           const GridShape& grid);
DeformationBasis load_or_build_basis(const HarmonicSpec& spec, const GridShape& grid,
                                     const std::optional<std::filesystem::path>& cache_root);

}  // namespace elastica
