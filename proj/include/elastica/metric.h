#pragma once

#include "elastica/path.h"
#include "elastica/surface.h"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace elastica {

// Weights of the elastic metric: a penalizes area-preserving changes of the
// induced metric, b = (lambda + a) / 2 changes of patch area, c bending.
struct ElasticParams {
  double a = 1.0;
  double lambda = 0.125;
  double c = 0.125;

  double b() const { return 0.5 * (lambda + a); }
  // Throws ValidationError unless a >= 0, c >= 0 and a + lambda > 0 or c > 0.
  void validate() const;
};

enum class Evaluator {
  I_II,      // first/second fundamental form time derivatives
  K1K2,      // principal curvatures from the second fundamental form
  POLYFIT,   // principal curvatures from local quadric fits
  TRIANGLE,  // quadric-fit curvatures with triangle-area weights
};

enum class CurvatureSource { Direct, Polyfit };

std::string to_string(Evaluator e);
// Accepts the CLI spellings i2, k1k2, polyfit, triangle.
Evaluator parse_evaluator(const std::string& name);

struct EnergyOptions {
  int polyfit_radius = 2;
  double immersion_eps = kDefaultImmersionEps;
};

struct EnergyBreakdown {
  Evaluator evaluator = Evaluator::I_II;
  double total = 0.0;
  // For I_II the four integrals E1..E4. For the curvature evaluators the
  // normal-deformation, area-change and bending parts, with entry 2 zero.
  std::array<double, 4> terms{};
  // Integrated kinetic value of frame k (without the dt factor).
  std::vector<double> per_frame;
};

// Full elastic metric on arbitrary perturbations.
double metric_pair(const Surface& s, const TangentField& df1, const TangentField& df2, const ElasticParams& p,
                   PoleMargin margin = {});

// Elastic metric restricted to the normal components; zero on tangent fields.
double gauge_pair(const Surface& s, const TangentField& df1, const TangentField& df2, const ElasticParams& p,
                  PoleMargin margin = {});

// Normal-field form of the metric for perturbations h n and k n.
double curvature_pair(const Surface& s, const ScalarField& h, const ScalarField& k, const ElasticParams& p,
                      PoleMargin margin = {}, CurvatureSource source = CurvatureSource::Direct,
                      const EnergyOptions& opts = {});

// Energy of a discrete path: frame-k velocity (psi_{k+1} - psi_k) / dt,
// normal part taken against frame k, left-endpoint rule in time.
EnergyBreakdown path_energy(const Path& path, const ElasticParams& p, PoleMargin margin, Evaluator evaluator,
                            const EnergyOptions& opts = {});

// Sum over frames of sqrt(kinetic_k) * dt.
double path_length(const Path& path, const ElasticParams& p, PoleMargin margin, Evaluator evaluator,
                   const EnergyOptions& opts = {});
double path_length(const EnergyBreakdown& energy);

// Energy of the radial linear path between concentric spheres.
double theoretical_sphere_energy(double r1, double r2, const ElasticParams& p);

// Per-vertex areas: a third of each incident triangle when every grid quad is
// split along its (i, j)-(i+1, j+1) diagonal.
ScalarField vertex_areas(const Surface& s);

// Order-independent-of-thread-count reduction: pairwise tree sum.
double pairwise_sum(std::span<const double> values);

}  // namespace elastica
