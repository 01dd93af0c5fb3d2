#include "elastica/straighten.h"

#include "elastica/errors.h"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace elastica {

void SolverConfig::validate() const {
  if (!(eps1 > 0) || !(eps2 > 0) || !(grad_tol > 0)) throw ValidationError("eps1, eps2 and grad_tol must be > 0");
  if (!(step_floor > 0) || step_floor > eps2) throw ValidationError("step floor must lie in (0, eps2]");
  if (step_growth < 1.0 || step_cap < eps2) throw ValidationError("step growth must be >= 1 and the cap >= eps2");
  if (max_iter < 0) throw ValidationError("max_iter must be >= 0");
  if (max_failures < 1) throw ValidationError("max_failures must be >= 1");
  if (frames < 2) throw ValidationError("a path needs at least two frames");
  if (workers < 1) throw ValidationError("workers must be >= 1");
  params.validate();
  basis.validate();
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradTol: return "grad_tol";
    case StopReason::MaxIter: return "max_iter";
    case StopReason::StepFloor: return "step_floor";
    case StopReason::Failures: return "failures";
  }
  return "unknown";
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  const int threads = std::min(workers, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double checked_energy(const Path& path, const SolverConfig& cfg) {
  for (int k = 1; k + 1 < path.size(); ++k) {
    int row = -1, col = -1;
    if (!is_immersed(path.frames[k], cfg.energy.immersion_eps, &row, &col)) {
      throw ImmersionLost("frame " + std::to_string(k) + " is not immersed at (" + std::to_string(row) + ", " +
                          std::to_string(col) + ")");
    }
  }
  try {
    return path_energy(path, cfg.params, cfg.margin, cfg.evaluator, cfg.energy).total;
  } catch (const DegenerateMetric& e) {
    throw ImmersionLost(e.what());
  } catch (const SingularFit& e) {
    throw ImmersionLost(e.what());
  }
}

double directional_derivative(const Path& path, const DeformationBasis& basis, int element,
                              const SolverConfig& cfg, std::optional<double> base_energy) {
  Path plus = path;
  perturb(plus, basis, element, cfg.eps1);
  const double e_plus = checked_energy(plus, cfg);
  if (cfg.central) {
    Path minus = path;
    perturb(minus, basis, element, -cfg.eps1);
    return (e_plus - checked_energy(minus, cfg)) / (2.0 * cfg.eps1);
  }
  const double e0 = base_energy ? *base_energy : checked_energy(path, cfg);
  return (e_plus - e0) / cfg.eps1;
}

namespace {

// path - step * sum_i grad_i P_{j_i}(t_k) B_i on the interior frames.
Path descend(const Path& path, const DeformationBasis& basis, const std::vector<double>& grad, double step) {
  Path out = path;
  const int T = path.size();
  const std::size_t S = basis.spatial.size();
  for (int k = 1; k + 1 < T; ++k) {
    std::vector<double> coef(S, 0.0);
    for (int i = 0; i < basis.size(); ++i) {
      const BasisElement& e = basis.elements[i];
      coef[e.spatial] += grad[i] * time_profile(e.time_mode, path.time(k));
    }
    VectorField pts = path.frames[k].points();
    for (std::size_t s = 0; s < S; ++s) {
      if (coef[s] == 0.0) continue;
      const double w = -step * coef[s];
      const VectorField& B = basis.spatial[s];
      for (std::size_t q = 0; q < pts.size(); ++q) pts[q] += w * B[q];
    }
    out.frames[k] = Surface(std::move(pts));
  }
  return out;
}

}  // namespace

StraightenResult straighten(const Path& initial, const DeformationBasis& basis, const SolverConfig& cfg) {
  cfg.validate();
  initial.validate();
  if (!(basis.grid == initial.shape())) throw ValidationError("basis grid differs from path grid");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  StraightenResult result{initial, {}};
  SolveTrace& trace = result.trace;
  trace.basis_size = basis.size();
  Path& path = result.path;
  double energy = checked_energy(path, cfg);
  trace.initial_energy = energy;
  double step = cfg.eps2;
  int failures = 0;
  const int n = basis.size();
  std::vector<double> grad(n);

  for (int iter = 0;; ++iter) {
    if (iter >= cfg.max_iter) {
      trace.reason = StopReason::MaxIter;
      break;
    }
    if (cfg.keep_snapshots) trace.snapshots.push_back(path);
    parallel_for(n, cfg.workers, [&](int i) { grad[i] = directional_derivative(path, basis, i, cfg, energy); });
    double grad2 = 0.0;
    for (double g : grad) grad2 += g * g;
    IterationRecord rec{energy, grad2, 0.0, 0.0};
    if (grad2 <= cfg.grad_tol) {
      rec.wall = elapsed();
      trace.iterations.push_back(rec);
      trace.converged = true;
      trace.reason = StopReason::GradTol;
      break;
    }

    bool accepted = false;
    while (step >= cfg.step_floor && failures < cfg.max_failures) {
      Path candidate = descend(path, basis, grad, step);
      double e_new;
      try {
        e_new = checked_energy(candidate, cfg);
      } catch (const ImmersionLost&) {
        ++failures;
        step *= 0.5;
        continue;
      }
      if (!(e_new <= energy)) {
        step *= 0.5;
        continue;
      }
      failures = 0;
      path = std::move(candidate);
      energy = e_new;
      rec.step = step;
      step = std::min(step * cfg.step_growth, cfg.step_cap);
      accepted = true;
      break;
    }
    rec.wall = elapsed();
    trace.iterations.push_back(rec);
    if (!accepted) {
      trace.reason = failures >= cfg.max_failures ? StopReason::Failures : StopReason::StepFloor;
      if (trace.reason == StopReason::Failures) {
        throw ImmersionLost("descent aborted after " + std::to_string(failures) + " consecutive immersion failures");
      }
      break;
    }
  }
  trace.final_energy = energy;
  return result;
}

StraightenResult straighten(const Path& initial, const SolverConfig& cfg) {
  const DeformationBasis basis = load_or_build_basis(cfg.basis, initial.shape(), cfg.cache_root);
  return straighten(initial, basis, cfg);
}

GeodesicResult geodesic_distance(const Surface& s1, const Surface& s2, const DeformationBasis& basis,
                                 const SolverConfig& cfg) {
  cfg.validate();
  if (!(s1.shape() == s2.shape())) throw NonUniformGrid("surfaces have different grids", 1);
  GeodesicResult out;
  Surface from = s1, to = s2;
  if (cfg.align) {
    AlignOptions opts;
    opts.params = cfg.params;
    opts.margin = cfg.margin;
    opts.energy = cfg.energy;
    AlignedPair aligned = align_pair_or_normalize(s1, s2, opts);
    from = std::move(aligned.first);
    to = std::move(aligned.second);
    out.alignment = aligned.report;
  }
  StraightenResult solved = straighten(linear_path(from, to, cfg.frames), basis, cfg);
  out.distance = path_length(solved.path, cfg.params, cfg.margin, cfg.evaluator, cfg.energy);
  out.path = std::move(solved.path);
  out.trace = std::move(solved.trace);
  return out;
}

GeodesicResult geodesic_distance(const Surface& s1, const Surface& s2, const SolverConfig& cfg) {
  const DeformationBasis basis = load_or_build_basis(cfg.basis, s1.shape(), cfg.cache_root);
  return geodesic_distance(s1, s2, basis, cfg);
}

DistanceMatrix distance_matrix(const std::vector<Surface>& surfaces, const SolverConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(surfaces.size());
  DistanceMatrix out;
  out.distances = Eigen::MatrixXd::Zero(n, n);
  if (n < 2) return out;
  for (const Surface& s : surfaces) {
    if (!(s.shape() == surfaces.front().shape())) throw ValidationError("distance matrix inputs must share one grid");
  }
  const DeformationBasis basis = load_or_build_basis(cfg.basis, surfaces.front().shape(), cfg.cache_root);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) pairs.emplace_back(i, j);
  }
  SolverConfig single = cfg;
  single.workers = 1;
  std::vector<GeodesicResult> results(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), cfg.workers, [&](int p) {
    results[p] = geodesic_distance(surfaces[pairs[p].first], surfaces[pairs[p].second], basis, single);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.distances(pairs[p].first, pairs[p].second) = results[p].distance;
    out.converged = out.converged && results[p].trace.reason != StopReason::MaxIter;
    out.traces.push_back(std::move(results[p].trace));
  }
  return out;
}

}  // namespace elastica
