#include "elastica/basis.h"

#include "elastica/errors.h"
#include "elastica/harmonics.h"
#include "elastica/io.h"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace elastica {

void HarmonicSpec::validate() const {
  if (degree < 1) throw ValidationError("harmonic degree must be >= 1");
  if (time_modes < 1) throw ValidationError("time modes must be >= 1");
  if (max_elements < 0) throw ValidationError("max_elements must be >= 0");
}

double time_profile(int j, double t) {
  // Evaluate sin(pi j t) exactly zero at the endpoints.
  if (t == 0.0 || t == 1.0) return 0.0;
  return 0.25 * std::sin(std::numbers::pi * j * t);
}

namespace {

// A field and its first partials stacked into one vector, pre-multiplied by
// sqrt(w) so the H1 product becomes a plain dot product.
Eigen::VectorXd stack_weighted(const VectorField& f, const Eigen::VectorXd& sqrt_w) {
  const std::size_t n = f.size();
  const Partials d = partials(f);
  Eigen::VectorXd out(9 * n);
  for (std::size_t q = 0; q < n; ++q) {
    for (int c = 0; c < 3; ++c) {
      out(3 * q + c) = sqrt_w(q) * f[q](c);
      out(3 * n + 3 * q + c) = sqrt_w(q) * d.fu[q](c);
      out(6 * n + 3 * q + c) = sqrt_w(q) * d.fv[q](c);
    }
  }
  return out;
}

VectorField unstack(const Eigen::VectorXd& x, const Eigen::VectorXd& sqrt_w, const GridShape& g) {
  VectorField f(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    f[q] = Vec3(x(3 * q), x(3 * q + 1), x(3 * q + 2)) / sqrt_w(q);
  }
  return f;
}

Eigen::VectorXd sqrt_weights(const GridShape& g) {
  const ScalarField w = sphere_quadrature_weights(g);
  Eigen::VectorXd s(g.size());
  for (std::size_t q = 0; q < g.size(); ++q) s(q) = std::sqrt(w[q]);
  return s;
}

}  // namespace

double h1_inner(const VectorField& a, const VectorField& b) {
  if (!(a.shape() == b.shape())) throw ValidationError("h1_inner: grid mismatch");
  const ScalarField w = sphere_quadrature_weights(a.shape());
  const Partials da = partials(a);
  const Partials db = partials(b);
  double sum = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    sum += w[q] * (a[q].dot(b[q]) + da.fu[q].dot(db.fu[q]) + da.fv[q].dot(db.fv[q]));
  }
  return sum;
}

Orthonormalized orthonormalize_h1(const std::vector<VectorField>& fields, double tol) {
  Orthonormalized out;
  if (fields.empty()) return out;
  const GridShape g = fields.front().shape();
  const Eigen::VectorXd sw = sqrt_weights(g);
  std::vector<Eigen::VectorXd> q;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!(fields[k].shape() == g)) throw ValidationError("orthonormalize_h1: grid mismatch");
    Eigen::VectorXd x = stack_weighted(fields[k], sw);
    const double original = x.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : q) x -= e.dot(x) * e;
    }
    const double residual = x.norm();
    if (original == 0.0 || residual < tol * original || residual < tol) {
      out.dropped.push_back(static_cast<int>(k));
      out.warnings.push_back("RankDeficient: field " + std::to_string(k) + " dropped (residual " +
                             std::to_string(residual) + ")");
      continue;
    }
    x /= residual;
    q.push_back(std::move(x));
    out.kept.push_back(static_cast<int>(k));
  }
  // Partials are linear, so the leading block alone recovers the field.
  out.fields.reserve(q.size());
  for (const auto& e : q) out.fields.push_back(unstack(e, sw, g));
  return out;
}

DeformationBasis build_basis(const HarmonicSpec& spec, const GridShape& grid) {
  spec.validate();
  const std::vector<ScalarField> harmonics = real_harmonics(spec.degree, grid);
  const std::vector<HarmonicIndex> idx = harmonic_indices(spec.degree);

  std::vector<VectorField> raw;
  std::vector<SpatialId> ids;
  for (std::size_t h = 0; h < harmonics.size(); ++h) {
    for (int axis = 0; axis < 3; ++axis) {
      VectorField f(grid, Vec3::Zero());
      for (std::size_t q = 0; q < grid.size(); ++q) f[q](axis) = harmonics[h][q];
      raw.push_back(std::move(f));
      ids.push_back({idx[h].l, idx[h].m, axis});
    }
  }

  Orthonormalized ortho = orthonormalize_h1(raw);
  DeformationBasis basis;
  basis.grid = grid;
  basis.spec = spec;
  basis.warnings = std::move(ortho.warnings);
  basis.spatial = std::move(ortho.fields);
  for (int k : ortho.kept) basis.spatial_ids.push_back(ids[k]);

  const int limit = spec.count();
  for (std::size_t s = 0; s < basis.spatial.size(); ++s) {
    for (int j = 1; j <= spec.time_modes; ++j) {
      if (static_cast<int>(basis.elements.size()) >= limit) break;
      basis.elements.push_back({static_cast<int>(s), j, basis.spatial_ids[s]});
    }
  }
  return basis;
}

void perturb(Path& path, const DeformationBasis& basis, int element, double eps) {
  const BasisElement& e = basis.elements.at(element);
  const VectorField& B = basis.spatial[e.spatial];
  if (!(B.shape() == path.shape())) throw ValidationError("perturb: basis grid differs from path grid");
  const int T = path.size();
  for (int k = 1; k + 1 < T; ++k) {
    const double s = eps * time_profile(e.time_mode, path.time(k));
    if (s == 0.0) continue;
    VectorField pts = path.frames[k].points();
    for (std::size_t q = 0; q < pts.size(); ++q) pts[q] += s * B[q];
    path.frames[k] = Surface(std::move(pts));
  }
}

Surface reconstruct(const Surface& s, int degree) {
  if (degree < 0) throw ValidationError("reconstruct: degree must be >= 0");
  const GridShape& g = s.shape();
  const ScalarField w = sphere_quadrature_weights(g);
  const std::vector<ScalarField> Y = real_harmonics(degree, g);
  VectorField out(g, Vec3::Zero());
  for (const ScalarField& y : Y) {
    Vec3 coef = Vec3::Zero();
    for (std::size_t q = 0; q < g.size(); ++q) coef += w[q] * y[q] * s.points()[q];
    for (std::size_t q = 0; q < g.size(); ++q) out[q] += y[q] * coef;
  }
  return Surface(std::move(out));
}

std::filesystem::path basis_cache_file(const std::filesystem::path& root, const HarmonicSpec& spec,
                                       const GridShape& grid) {
  std::string name = "basis_N" + std::to_string(spec.degree) + "_J" + std::to_string(spec.time_modes);
  if (spec.max_elements > 0 && spec.max_elements < spec.full_count()) name += "_M" + std::to_string(spec.max_elements);
  name += "_" + std::to_string(grid.nu) + "x" + std::to_string(grid.nv) + ".gib";
  return root / name;
}

void save_basis(const DeformationBasis& basis, const std::filesystem::path& file) {
  std::vector<std::uint8_t> out{'G', 'I', 'B', '1'};
  le::put_u32(out, static_cast<std::uint32_t>(basis.spec.degree));
  le::put_u32(out, static_cast<std::uint32_t>(basis.spec.time_modes));
  le::put_u32(out, static_cast<std::uint32_t>(basis.spec.max_elements));
  le::put_u32(out, static_cast<std::uint32_t>(basis.grid.nu));
  le::put_u32(out, static_cast<std::uint32_t>(basis.grid.nv));
  le::put_u32(out, static_cast<std::uint32_t>(basis.spatial.size()));
  for (std::size_t s = 0; s < basis.spatial.size(); ++s) {
    le::put_i32(out, basis.spatial_ids[s].l);
    le::put_i32(out, basis.spatial_ids[s].m);
    le::put_i32(out, basis.spatial_ids[s].axis);
    for (const Vec3& p : basis.spatial[s]) {
      for (int c = 0; c < 3; ++c) le::put_f64(out, p(c));
    }
  }
  write_bytes(file, out);

  nlohmann::json manifest;
  manifest["degree"] = basis.spec.degree;
  manifest["time_modes"] = basis.spec.time_modes;
  manifest["max_elements"] = basis.spec.max_elements;
  manifest["grid"] = {basis.grid.nu, basis.grid.nv};
  manifest["count"] = basis.size();
  manifest["content_hash"] = hex_digest(content_hash(out));
  manifest["warnings"] = basis.warnings;
  auto& elems = manifest["elements"] = nlohmann::json::array();
  for (const BasisElement& e : basis.elements) {
    elems.push_back({{"l", e.id.l}, {"m", e.id.m}, {"axis", e.id.axis}, {"j", e.time_mode}});
  }
  std::ofstream(std::filesystem::path(file).replace_extension(".json")) << manifest.dump(2) << '\n';
}

std::optional<DeformationBasis> load_basis(const std::filesystem::path& file, const HarmonicSpec& spec,
                                           const GridShape& grid) {
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    const std::vector<std::uint8_t> bytes = read_bytes(file);
    le::Reader in(bytes);
    in.expect_magic("GIB1");
    const int degree = static_cast<int>(in.u32());
    const int modes = static_cast<int>(in.u32());
    const int max_elements = static_cast<int>(in.u32());
    const GridShape g{static_cast<int>(in.u32()), static_cast<int>(in.u32())};
    if (degree != spec.degree || modes != spec.time_modes || max_elements != spec.max_elements || !(g == grid)) {
      return std::nullopt;
    }
    const std::uint32_t count = in.u32();
    DeformationBasis basis;
    basis.grid = grid;
    basis.spec = spec;
    for (std::uint32_t s = 0; s < count; ++s) {
      SpatialId id;
      id.l = in.i32();
      id.m = in.i32();
      id.axis = in.i32();
      VectorField f(grid);
      for (Vec3& p : f) {
        const double x = in.f64(), y = in.f64(), z = in.f64();
        p = Vec3(x, y, z);
      }
      basis.spatial.push_back(std::move(f));
      basis.spatial_ids.push_back(id);
    }
    if (in.remaining() != 0) return std::nullopt;
    const int limit = spec.count();
    for (std::size_t s = 0; s < basis.spatial.size(); ++s) {
      for (int j = 1; j <= spec.time_modes; ++j) {
        if (basis.size() >= limit) break;
        basis.elements.push_back({static_cast<int>(s), j, basis.spatial_ids[s]});
      }
    }
    return basis;
  } catch (const ParseError&) {
    // A corrupt cache is rebuilt rather than trusted.
    return std::nullopt;
  }
}

DeformationBasis load_or_build_basis(const HarmonicSpec& spec, const GridShape& grid,
                                     const std::optional<std::filesystem::path>& cache_root) {
  if (!cache_root) return build_basis(spec, grid);
  const auto file = basis_cache_file(*cache_root, spec, grid);
  if (auto cached = load_basis(file, spec, grid)) return std::move(*cached);
  DeformationBasis basis = build_basis(spec, grid);
  try {
    save_basis(basis, file);
  } catch (const std::exception&) {
    // Caching is best effort; an unwritable root must not fail the run.
  }
  return basis;
}

}  // namespace elastica
