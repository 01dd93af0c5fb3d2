#include "elastica/metric.h"

#include "elastica/errors.h"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace elastica {

namespace {

using Terms = std::array<double, 4>;

void check_shape(const GridShape& a, const GridShape& b) {
  if (!(a == b)) throw ValidationError("field grid does not match surface grid");
}

// Normal-field metric density for amplitudes h, k, without the area element.
Terms curvature_density_sum(const FundamentalForms& ff, const ScalarField& h, const ScalarField& k,
                            const ScalarField& weight, const ElasticParams& p, PoleMargin margin) {
  const GridShape& g = ff.E.shape();
  const auto [hu, hv] = scalar_partials(h);
  const auto [ku, kv] = scalar_partials(k);
  Terms t{};
  for (int i = margin.first_row(); i <= margin.last_row(g); ++i) {
    Terms row{};
    for (int j = 0; j < g.nv; ++j) {
      const double w = weight(i, j);
      const double diff = ff.k1(i, j) - ff.k2(i, j);
      const double sum = ff.k1(i, j) + ff.k2(i, j);
      const double hk = h(i, j) * k(i, j);
      row[0] += w * hk * 2.0 * p.a * diff * diff;
      row[1] += w * hk * 4.0 * p.b() * sum * sum;
      if (p.c != 0.0) {
        const double E = ff.E(i, j), F = ff.F(i, j), G = ff.G(i, j);
        const double det = E * G - F * F;
        const double grad =
            (G * hu(i, j) * ku(i, j) - F * (hu(i, j) * kv(i, j) + hv(i, j) * ku(i, j)) + E * hv(i, j) * kv(i, j)) / det;
        row[3] += w * p.c * grad;
      }
    }
    for (int q = 0; q < 4; ++q) t[q] += row[q];
  }
  return t;
}

Terms scale(Terms t, double s) {
  for (double& x : t) x *= s;
  return t;
}

ScalarField normal_amplitude(const VectorField& normals, const VectorField& velocity) {
  ScalarField h(velocity.shape());
  for (std::size_t q = 0; q < h.size(); ++q) h[q] = velocity[q].dot(normals[q]);
  return h;
}

// Frame kinetic value from the time derivatives of the fundamental forms.
Terms kinetic_i2(const Surface& frame, const VectorField& velocity, const ElasticParams& p, PoleMargin margin,
                 const EnergyOptions& opts) {
  const GridShape& g = frame.shape();
  const FundamentalForms ff = first_form(frame, opts.immersion_eps);
  const Partials d = partials(frame);
  VectorField vperp(g);
  for (std::size_t q = 0; q < vperp.size(); ++q) vperp[q] = velocity[q].dot(ff.normal[q]) * ff.normal[q];
  const Partials dv = partials(vperp);

  const double weight_a = p.a;
  const double weight_b = 0.5 * p.lambda + 0.25 * p.c;
  Terms t{};
  for (int i = margin.first_row(); i <= margin.last_row(g); ++i) {
    Terms row{};
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& fu = d.fu(i, j);
      const Vec3& fv = d.fv(i, j);
      const Vec3& tu = dv.fu(i, j);
      const Vec3& tv = dv.fv(i, j);
      const double E = ff.E(i, j), F = ff.F(i, j), G = ff.G(i, j);
      const double Ed = 2.0 * tu.dot(fu);
      const double Fd = tu.dot(fv) + fu.dot(tv);
      const double Gd = 2.0 * tv.dot(fv);
      const double det = E * G - F * F;
      const double root = std::sqrt(det);
      const double det32 = det * root;
      const double B = G * G * Ed * Ed + 2.0 * (E * G + F * F) * Fd * Fd + E * E * Gd * Gd - 4.0 * F * G * Ed * Fd +
                       2.0 * F * F * Ed * Gd - 4.0 * E * F * Fd * Gd;
      const double trace = G * Ed - 2.0 * F * Fd + E * Gd;
      row[0] += weight_a * B / det32;
      row[1] += weight_b * trace * trace / det32;
      if (p.c != 0.0) {
        const Vec3 w = tu.cross(fv) + fu.cross(tv);
        row[2] += -p.c * trace * ff.normal(i, j).dot(w) / det;
        row[3] += p.c * w.squaredNorm() / root;
      }
    }
    for (int q = 0; q < 4; ++q) t[q] += row[q];
  }
  return scale(t, g.du() * g.dv());
}

Terms kinetic_curvature(const Surface& frame, const VectorField& velocity, const ElasticParams& p, PoleMargin margin,
                        CurvatureSource source, const EnergyOptions& opts) {
  const FundamentalForms ff = source == CurvatureSource::Direct
                                  ? second_form_direct(frame, opts.immersion_eps)
                                  : second_form_polyfit(frame, opts.polyfit_radius, margin, opts.immersion_eps);
  const ScalarField h = normal_amplitude(ff.normal, velocity);
  const GridShape& g = frame.shape();
  return scale(curvature_density_sum(ff, h, h, ff.area, p, margin), g.du() * g.dv());
}

// Squared gradient of the piecewise-linear interpolant of h on one triangle,
// times the triangle area.
double triangle_dirichlet(const Vec3& p0, const Vec3& p1, const Vec3& p2, double h0, double h1, double h2) {
  const Vec3 e1 = p1 - p0, e2 = p2 - p0;
  const double g11 = e1.dot(e1), g12 = e1.dot(e2), g22 = e2.dot(e2);
  const double det = g11 * g22 - g12 * g12;
  if (!(det > 0.0)) return 0.0;
  const double d1 = h1 - h0, d2 = h2 - h0;
  const double quad = (g22 * d1 * d1 - 2.0 * g12 * d1 * d2 + g11 * d2 * d2) / det;
  return 0.5 * std::sqrt(det) * quad;
}

Terms kinetic_triangle(const Surface& frame, const VectorField& velocity, const ElasticParams& p, PoleMargin margin,
                       const EnergyOptions& opts) {
  const GridShape& g = frame.shape();
  FundamentalForms ff = second_form_polyfit(frame, opts.polyfit_radius, margin, opts.immersion_eps);
  const VectorField normals = facet_normals(frame);
  const ScalarField h = normal_amplitude(normals, velocity);
  const ScalarField areas = vertex_areas(frame);

  Terms t{};
  for (int i = margin.first_row(); i <= margin.last_row(g); ++i) {
    Terms row{};
    for (int j = 0; j < g.nv; ++j) {
      const double diff = ff.k1(i, j) - ff.k2(i, j);
      const double sum = ff.k1(i, j) + ff.k2(i, j);
      const double hh = h(i, j) * h(i, j);
      row[0] += areas(i, j) * hh * 2.0 * p.a * diff * diff;
      row[1] += areas(i, j) * hh * 4.0 * p.b() * sum * sum;
    }
    for (int q = 0; q < 4; ++q) t[q] += row[q];
  }
  if (p.c != 0.0) {
    const VectorField& f = frame.points();
    double bending = 0.0;
    for (int i = margin.first_row(); i < margin.last_row(g); ++i) {
      double row = 0.0;
      for (int j = 0; j < g.nv; ++j) {
        const int jn = g.wrap(j + 1);
        row += triangle_dirichlet(f(i, j), f(i + 1, j), f(i + 1, jn), h(i, j), h(i + 1, j), h(i + 1, jn));
        row += triangle_dirichlet(f(i, j), f(i + 1, jn), f(i, jn), h(i, j), h(i + 1, jn), h(i, jn));
      }
      bending += row;
    }
    t[3] = p.c * bending;
  }
  return t;
}

Terms frame_kinetic(const Surface& frame, const VectorField& velocity, const ElasticParams& p, PoleMargin margin,
                    Evaluator evaluator, const EnergyOptions& opts) {
  switch (evaluator) {
    case Evaluator::I_II:
      return kinetic_i2(frame, velocity, p, margin, opts);
    case Evaluator::K1K2:
      return kinetic_curvature(frame, velocity, p, margin, CurvatureSource::Direct, opts);
    case Evaluator::POLYFIT:
      return kinetic_curvature(frame, velocity, p, margin, CurvatureSource::Polyfit, opts);
    case Evaluator::TRIANGLE:
      return kinetic_triangle(frame, velocity, p, margin, opts);
  }
  throw ValidationError("unknown evaluator");
}

void check_margin(const GridShape& g, PoleMargin margin) {
  if (margin.rows < 1 || 2 * margin.rows >= g.nu) {
    throw ValidationError("pole margin " + std::to_string(margin.rows) + " is invalid for " + std::to_string(g.nu) +
                          " rows");
  }
}

}  // namespace

void ElasticParams::validate() const {
  if (!(a >= 0.0) || !(c >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("elastic weights need a >= 0, c >= 0 and finite lambda");
  }
  if (!(a + lambda > 0.0 || c > 0.0)) throw ValidationError("elastic weights give an identically zero metric");
}

std::string to_string(Evaluator e) {
  switch (e) {
    case Evaluator::I_II:
      return "i2";
    case Evaluator::K1K2:
      return "k1k2";
    case Evaluator::POLYFIT:
      return "polyfit";
    case Evaluator::TRIANGLE:
      return "triangle";
  }
  return "?";
}

Evaluator parse_evaluator(const std::string& name) {
  if (name == "i2") return Evaluator::I_II;
  if (name == "k1k2") return Evaluator::K1K2;
  if (name == "polyfit") return Evaluator::POLYFIT;
  if (name == "triangle") return Evaluator::TRIANGLE;
  throw ValidationError("unknown evaluator '" + name + "' (expected i2, k1k2, polyfit or triangle)");
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ScalarField vertex_areas(const Surface& s) {
  const GridShape& g = s.shape();
  const VectorField& f = s.points();
  ScalarField areas(g, 0.0);
  for (int i = 0; i < g.nu - 1; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const int jn = g.wrap(j + 1);
      const double t1 = 0.5 * (f(i + 1, j) - f(i, j)).cross(f(i + 1, jn) - f(i, j)).norm() / 3.0;
      const double t2 = 0.5 * (f(i + 1, jn) - f(i, j)).cross(f(i, jn) - f(i, j)).norm() / 3.0;
      areas(i, j) += t1 + t2;
      areas(i + 1, j) += t1;
      areas(i + 1, jn) += t1 + t2;
      areas(i, jn) += t2;
    }
  }
  return areas;
}

double metric_pair(const Surface& s, const TangentField& df1, const TangentField& df2, const ElasticParams& p,
                   PoleMargin margin) {
  const GridShape& g = s.shape();
  check_shape(g, df1.shape());
  check_shape(g, df2.shape());
  check_margin(g, margin);
  const FundamentalForms ff = first_form(s);
  const Partials d = partials(s);
  const Partials d1 = partials(df1);
  const Partials d2 = partials(df2);

  double total = 0.0;
  for (int i = margin.first_row(); i <= margin.last_row(g); ++i) {
    double row = 0.0;
    for (int j = 0; j < g.nv; ++j) {
      const Vec3& fu = d.fu(i, j);
      const Vec3& fv = d.fv(i, j);
      const Vec3& n = ff.normal(i, j);
      const double root = ff.area(i, j);
      Eigen::Matrix2d metric;
      metric << ff.E(i, j), ff.F(i, j), ff.F(i, j), ff.G(i, j);
      const Eigen::Matrix2d inv = metric.inverse();

      auto variation = [&](const Partials& dd, Eigen::Matrix2d& A, Vec3& dn) {
        const Vec3& xu = dd.fu(i, j);
        const Vec3& xv = dd.fv(i, j);
        Eigen::Matrix2d dg;
        const double off = fu.dot(xv) + fv.dot(xu);
        dg << 2.0 * fu.dot(xu), off, off, 2.0 * fv.dot(xv);
        A = inv * dg;
        dn = -0.5 * A.trace() * n + (xu.cross(fv) + fu.cross(xv)) / root;
      };
      Eigen::Matrix2d A1, A2;
      Vec3 n1, n2;
      variation(d1, A1, n1);
      variation(d2, A2, n2);
      const double tr1 = A1.trace(), tr2 = A2.trace();
      const double traceless = (A1 * A2).trace() - 0.5 * tr1 * tr2;
      row += root * (p.a * traceless + p.b() * tr1 * tr2 + p.c * n1.dot(n2));
    }
    total += row;
  }
  return total * g.du() * g.dv();
}

double gauge_pair(const Surface& s, const TangentField& df1, const TangentField& df2, const ElasticParams& p,
                  PoleMargin margin) {
  const FundamentalForms ff = first_form(s);
  return metric_pair(s, decompose(ff.normal, df1).normal, decompose(ff.normal, df2).normal, p, margin);
}

double curvature_pair(const Surface& s, const ScalarField& h, const ScalarField& k, const ElasticParams& p,
                      PoleMargin margin, CurvatureSource source, const EnergyOptions& opts) {
  const GridShape& g = s.shape();
  check_shape(g, h.shape());
  check_shape(g, k.shape());
  check_margin(g, margin);
  const FundamentalForms ff = source == CurvatureSource::Direct
                                  ? second_form_direct(s, opts.immersion_eps)
                                  : second_form_polyfit(s, opts.polyfit_radius, margin, opts.immersion_eps);
  const Terms t = curvature_density_sum(ff, h, k, ff.area, p, margin);
  return (t[0] + t[1] + t[3]) * g.du() * g.dv();
}

EnergyBreakdown path_energy(const Path& path, const ElasticParams& p, PoleMargin margin, Evaluator evaluator,
                            const EnergyOptions& opts) {
  path.validate();
  p.validate();
  const GridShape& g = path.shape();
  check_margin(g, margin);
  const int T = path.size();
  const double dt = path.dt();

  EnergyBreakdown out;
  out.evaluator = evaluator;
  out.per_frame.resize(T - 1);
  std::vector<Terms> frame_terms(T - 1);
  for (int k = 0; k < T - 1; ++k) {
    VectorField velocity(g);
    const VectorField& a = path.frames[k].points();
    const VectorField& b = path.frames[k + 1].points();
    for (std::size_t q = 0; q < velocity.size(); ++q) velocity[q] = (b[q] - a[q]) / dt;
    try {
      frame_terms[k] = frame_kinetic(path.frames[k], velocity, p, margin, evaluator, opts);
    } catch (const DegenerateMetric& e) {
      throw e.in_frame(k);
    }
    const Terms& t = frame_terms[k];
    out.per_frame[k] = t[0] + t[1] + t[2] + t[3];
  }
  std::vector<double> column(T - 1);
  for (int q = 0; q < 4; ++q) {
    for (int k = 0; k < T - 1; ++k) column[k] = frame_terms[k][q];
    out.terms[q] = pairwise_sum(column) * dt;
  }
  out.total = pairwise_sum(out.per_frame) * dt;
  return out;
}

double path_length(const EnergyBreakdown& energy) {
  std::vector<double> speeds(energy.per_frame.size());
  for (std::size_t k = 0; k < speeds.size(); ++k) speeds[k] = std::sqrt(std::max(energy.per_frame[k], 0.0));
  return pairwise_sum(speeds) / static_cast<double>(speeds.size());
}

double path_length(const Path& path, const ElasticParams& p, PoleMargin margin, Evaluator evaluator,
                   const EnergyOptions& opts) {
  return path_length(path_energy(path, p, margin, evaluator, opts));
}

double theoretical_sphere_energy(double r1, double r2, const ElasticParams& p) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ValidationError("sphere radii must be positive");
  const double dr = r2 - r1;
  return 32.0 * std::numbers::pi * (p.a + p.lambda) * dr * dr;
}

}  // namespace elastica
