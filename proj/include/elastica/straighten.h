#pragma once

#include "elastica/alignment.h"
#include "elastica/basis.h"
#include "elastica/metric.h"
#include "elastica/path.h"

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace elastica {

struct SolverConfig {
  double eps1 = 1e-4;        // directional-derivative step
  double eps2 = 1e-2;        // initial descent step
  double step_floor = 1e-6;  // give up once the descent step falls below this
  double step_growth = 1.5;  // applied after each accepted step; 1 keeps it fixed
  double step_cap = 10.0;
  double grad_tol = 1e-3;    // stop once |grad E|^2 is at or below this
  int max_iter = 800;
  int max_failures = 20;  // consecutive rejected steps before aborting
  int frames = 7;
  int workers = 1;
  bool central = false;  // central differences, for verification only
  bool keep_snapshots = false;
  bool align = true;
  Evaluator evaluator = Evaluator::K1K2;
  ElasticParams params{};
  PoleMargin margin{};
  EnergyOptions energy{};
  HarmonicSpec basis{};
  std::optional<std::filesystem::path> cache_root;

  void validate() const;
};

enum class StopReason { GradTol, MaxIter, StepFloor, Failures };
std::string to_string(StopReason r);

struct IterationRecord {
  double energy = 0.0;  // energy of the path entering the iteration
  double grad2 = 0.0;
  double step = 0.0;  // accepted step, 0 when none was taken
  double wall = 0.0;  // seconds since the solve started
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  std::vector<Path> snapshots;  // path entering each iteration, if requested
  double initial_energy = 0.0;
  double final_energy = 0.0;
  bool converged = false;
  StopReason reason = StopReason::MaxIter;
  int basis_size = 0;
};

struct StraightenResult {
  Path path;
  SolveTrace trace;
};

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; the caller stores results by index.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

// Energy of the path under the configured evaluator. DegenerateMetric and a
// failed immersion check on any frame surface as ImmersionLost.
double checked_energy(const Path& path, const SolverConfig& cfg);

// Forward difference (E(path + eps1 b) - E(path)) / eps1, or the central
// difference when cfg.central is set. `base_energy` skips re-evaluating
// E(path) when it is already known.
double directional_derivative(const Path& path, const DeformationBasis& basis, int element,
                              const SolverConfig& cfg, std::optional<double> base_energy = std::nullopt);

// Gradient descent over the basis perturbations with backtracking. The
// endpoint frames are never modified.
StraightenResult straighten(const Path& initial, const DeformationBasis& basis, const SolverConfig& cfg);
StraightenResult straighten(const Path& initial, const SolverConfig& cfg);

struct GeodesicResult {
  double distance = 0.0;
  Path path;
  SolveTrace trace;
  std::optional<AlignmentReport> alignment;
};

// Aligns (unless cfg.align is off), starts from the straight line and
// returns the length of the straightened path.
GeodesicResult geodesic_distance(const Surface& s1, const Surface& s2, const SolverConfig& cfg);
GeodesicResult geodesic_distance(const Surface& s1, const Surface& s2, const DeformationBasis& basis,
                                 const SolverConfig& cfg);

struct DistanceMatrix {
  Eigen::MatrixXd distances;  // entry (i, j) solves from surface i to surface j
  std::vector<SolveTrace> traces;  // row-major over all ordered pairs
  bool converged = true;
};

// Geodesic distances for every ordered pair, the diagonal included, so the
// diagonal doubles as a check of the solver. Pairs run in parallel over
// cfg.workers, each solve single-threaded.
DistanceMatrix distance_matrix(const std::vector<Surface>& surfaces, const SolverConfig& cfg);

}  // namespace elastica
