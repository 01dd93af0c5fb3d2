#include "elastica/alignment.h"
#include "elastica/basis.h"
#include "elastica/errors.h"
#include "elastica/io.h"
#include "elastica/metric.h"
#include "elastica/shapes.h"
#include "elastica/straighten.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef ELASTICA_VERSION
#define ELASTICA_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace elastica;

namespace {

constexpr int kNotConverged = 4;

// Flags shared by the subcommands. Values given explicitly on the command
// line win over a --config file, which wins over the defaults.
struct Flags {
  double a = 1.0, lambda = 0.125, c = 0.125;
  int pole_margin = 3;
  int polyfit_radius = 2;
  int frames = 7;
  std::string evaluator = "k1k2";
  int degree = 5, modes = 4, max_elements = 0;
  double eps1 = 1e-4, eps2 = 1e-2, grad_tol = 1e-3;
  int max_iter = 800;
  int workers = 1;
  bool no_align = false;
  bool seedless = false;
  std::string config;
  std::map<std::string, CLI::Option*> given;

  bool set(const std::string& name) const {
    auto it = given.find(name);
    return it != given.end() && it->second->count() > 0;
  }
};

void add_flags(CLI::App* app, Flags& f) {
  auto& g = f.given;
  g["a"] = app->add_option("--a", f.a, "weight of area-preserving metric changes");
  g["lambda"] = app->add_option("--lambda", f.lambda, "area-change weight, b = (lambda + a) / 2");
  g["c"] = app->add_option("--c", f.c, "bending weight");
  g["pole_margin"] = app->add_option("--pole-margin", f.pole_margin, "rows skipped at each pole");
  g["polyfit_radius"] = app->add_option("--polyfit-radius", f.polyfit_radius, "quadric-fit neighbourhood radius");
  g["frames"] = app->add_option("--frames", f.frames, "frames per path");
  g["evaluator"] = app->add_option("--evaluator", f.evaluator, "energy evaluator")
                       ->check(CLI::IsMember({"i2", "k1k2", "polyfit", "triangle"}));
  g["harmonics_degree"] = app->add_option("--harmonics-degree", f.degree, "largest harmonic degree N");
  g["time_modes"] = app->add_option("--time-modes", f.modes, "time profiles J");
  g["max_elements"] = app->add_option("--max-elements", f.max_elements, "truncate the basis (0 keeps all)");
  g["eps1"] = app->add_option("--eps1", f.eps1, "directional-derivative step");
  g["eps2"] = app->add_option("--eps2", f.eps2, "initial descent step");
  g["grad_tol"] = app->add_option("--grad-tol", f.grad_tol, "stop once |grad E|^2 <= this");
  g["max_iter"] = app->add_option("--max-iter", f.max_iter, "iteration cap");
  g["workers"] = app->add_option("--workers", f.workers, "worker threads");
  g["no_align"] = app->add_flag("--no-align", f.no_align, "skip rigid alignment");
  g["seedless"] = app->add_flag("--seedless", f.seedless, "accepted for compatibility; nothing is random");
  app->add_option("--config", f.config, "JSON solver configuration")->check(CLI::ExistingFile);
}

SolverConfig solver_config(const Flags& f) {
  json file = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what(), e.byte);
    }
  }
  auto pick = [&](const std::string& key, auto flag_value) {
    using T = decltype(flag_value);
    if (f.set(key) || !file.contains(key)) return flag_value;
    try {
      return file.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  };
  SolverConfig cfg;
  cfg.params = {pick("a", f.a), pick("lambda", f.lambda), pick("c", f.c)};
  cfg.margin.rows = pick("pole_margin", f.pole_margin);
  cfg.energy.polyfit_radius = pick("polyfit_radius", f.polyfit_radius);
  cfg.frames = pick("frames", f.frames);
  cfg.evaluator = parse_evaluator(pick("evaluator", f.evaluator));
  cfg.basis = {pick("harmonics_degree", f.degree), pick("time_modes", f.modes), pick("max_elements", f.max_elements)};
  cfg.eps1 = pick("eps1", f.eps1);
  cfg.eps2 = pick("eps2", f.eps2);
  cfg.grad_tol = pick("grad_tol", f.grad_tol);
  cfg.max_iter = pick("max_iter", f.max_iter);
  cfg.workers = pick("workers", f.workers);
  cfg.align = !pick("no_align", f.no_align);
  const char* env = std::getenv("ELASTICA_CACHE");
  cfg.cache_root = fs::path(env && *env ? env : ".cache");
  if (cfg.margin.rows < 0) throw ValidationError("pole margin must be >= 0");
  cfg.validate();
  return cfg;
}

json config_json(const SolverConfig& cfg, const Flags& f) {
  return {{"a", cfg.params.a},
          {"lambda", cfg.params.lambda},
          {"c", cfg.params.c},
          {"pole_margin", cfg.margin.rows},
          {"polyfit_radius", cfg.energy.polyfit_radius},
          {"frames", cfg.frames},
          {"evaluator", to_string(cfg.evaluator)},
          {"harmonics_degree", cfg.basis.degree},
          {"time_modes", cfg.basis.time_modes},
          {"max_elements", cfg.basis.max_elements},
          {"eps1", cfg.eps1},
          {"eps2", cfg.eps2},
          {"grad_tol", cfg.grad_tol},
          {"max_iter", cfg.max_iter},
          {"workers", cfg.workers},
          {"align", cfg.align},
          {"seedless", f.seedless}};
}

json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

json mat_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

std::string file_digest(const fs::path& p) { return hex_digest(content_hash(read_bytes(p))); }

void write_text(const fs::path& p, const std::string& text) {
  write_bytes(p, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// Collects what a command read and wrote, then drops a manifest next to the
// primary output.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void config(json c) { config_ = std::move(c); }
  void input(const fs::path& p) { inputs_.push_back({{"path", p.string()}, {"digest", file_digest(p)}}); }
  void output(const fs::path& p) { outputs_.push_back({{"path", p.string()}, {"digest", file_digest(p)}}); }
  json& extra() { return extra_; }

  void write(const fs::path& primary) const {
    json m;
    m["command"] = command_;
    m["tool_version"] = ELASTICA_VERSION;
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (!extra_.is_null()) m["timings"] = extra_;
    write_text(fs::path(primary.string() + ".manifest.json"), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  json config_ = json::object();
  json inputs_ = json::array();
  json outputs_ = json::array();
  json extra_;
};

json energy_json(const EnergyBreakdown& e, const SolverConfig& cfg) {
  return {{"evaluator", to_string(e.evaluator)},
          {"a", cfg.params.a},
          {"lambda", cfg.params.lambda},
          {"c", cfg.params.c},
          {"pole_margin", cfg.margin.rows},
          {"total", e.total},
          {"terms", e.terms},
          {"per_frame", e.per_frame},
          {"length", path_length(e)}};
}

json trace_json(const SolveTrace& t) {
  json it = json::array();
  for (const auto& r : t.iterations) it.push_back({{"energy", r.energy}, {"grad2", r.grad2}, {"step", r.step}});
  return {{"initial_energy", t.initial_energy},
          {"final_energy", t.final_energy},
          {"converged", t.converged},
          {"stop_reason", to_string(t.reason)},
          {"basis_size", t.basis_size},
          {"iterations", it}};
}

json alignment_json(const AlignmentReport& r) {
  return {{"vol1", r.vol1},
          {"vol2", r.vol2},
          {"center1", vec_json(r.center1)},
          {"center2", vec_json(r.center2)},
          {"U1", mat_json(r.U1)},
          {"U2", mat_json(r.U2)},
          {"hypothesis_chosen", r.hypothesis},
          {"hypothesis_energies", r.hypothesis_energies},
          {"tie_gap", r.tie_gap},
          {"axis_gaps", {r.gaps1, r.gaps2}},
          {"rotated", r.rotated}};
}

// Scalar attribute for curvature and mesh export.
ScalarField scalar_field(const Surface& s, const std::string& name, const std::string& estimator,
                         const SolverConfig& cfg) {
  if (name == "pole-distance") {
    ScalarField d(s.shape());
    const Vec3 pole = s(0, 0);
    for (std::size_t q = 0; q < d.size(); ++q) d[q] = (s.points()[q] - pole).norm();
    return d;
  }
  const FundamentalForms forms = estimator == "polyfit" ? second_form_polyfit(s, cfg.energy.polyfit_radius, cfg.margin)
                                                          : second_form_direct(s);
  if (name == "k1") return forms.k1;
  if (name == "k2") return forms.k2;
  if (name == "H") return forms.H;
  return forms.K;
}

bool is_path_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string(magic, 4) == "GIP1";
}

std::vector<fs::path> surfaces_in(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && (entry.path().extension() == ".gis" || name.ends_with(".gis.txt"))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string shape_name(const fs::path& p) {
  std::string name = p.filename().string();
  for (const std::string ext : {".gis.txt", ".gis"}) {
    if (name.ends_with(ext)) return name.substr(0, name.size() - ext.size());
  }
  return name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic shape analysis of spherical surfaces"};
  app.set_version_flag("--version", ELASTICA_VERSION);
  app.require_subcommand(1);
  std::deque<Flags> flag_sets;
  auto flags_for = [&](CLI::App* sub) -> Flags& {
    flag_sets.emplace_back();
    add_flags(sub, flag_sets.back());
    return flag_sets.back();
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Sample an analytic shape on a grid");
  std::string gen_shape = "sphere", gen_reparam = "none", gen_out;
  double gen_radius = 1.0, gen_amplitude = 0.1, gen_angle = 0.0, gen_alpha = 0.4;
  std::vector<double> gen_axes{1, 1, 1}, gen_stretch{1, 1, 1}, gen_axis{0, 0, 1}, gen_beta{0.5, 0.0};
  int gen_l = 5, gen_m = 3, gen_nu = 64, gen_nv = 64, gen_shift = 0;
  gen->add_option("--shape", gen_shape)->check(CLI::IsMember({"sphere", "ellipsoid", "bump"}));
  gen->add_option("--radius", gen_radius);
  gen->add_option("--axes", gen_axes)->expected(3);
  gen->add_option("--amplitude", gen_amplitude);
  gen->add_option("--l", gen_l);
  gen->add_option("--m", gen_m);
  gen->add_option("--stretch", gen_stretch)->expected(3);
  gen->add_option("--nu", gen_nu);
  gen->add_option("--nv", gen_nv);
  gen->add_option("--reparam", gen_reparam)->check(CLI::IsMember({"none", "rotation", "moebius", "vshift"}));
  gen->add_option("--axis", gen_axis)->expected(3);
  gen->add_option("--angle", gen_angle);
  gen->add_option("--alpha", gen_alpha);
  gen->add_option("--beta", gen_beta)->expected(2);
  gen->add_option("--shift", gen_shift);
  gen->add_option("-o,--out", gen_out)->required();

  // path
  auto* path_cmd = app.add_subcommand("path", "Piecewise-linear path through surfaces");
  std::vector<std::string> path_inputs;
  std::string path_out;
  path_cmd->add_option("inputs", path_inputs)->required()->expected(2, 1 << 20)->check(CLI::ExistingFile);
  path_cmd->add_option("-o,--out", path_out)->required();
  Flags& path_flags = flags_for(path_cmd);

  // align
  auto* align = app.add_subcommand("align", "Rigidly align the second surface to the first");
  std::string align_in1, align_in2, align_out1, align_out2, align_report;
  align->add_option("first", align_in1)->required()->check(CLI::ExistingFile);
  align->add_option("second", align_in2)->required()->check(CLI::ExistingFile);
  align->add_option("--out1", align_out1);
  align->add_option("--out2", align_out2);
  align->add_option("--report", align_report);
  Flags& align_flags = flags_for(align);

  // energy
  auto* energy = app.add_subcommand("energy", "Energy and length of a path");
  std::string energy_in, energy_out;
  bool all_evaluators = false;
  energy->add_option("path", energy_in)->required()->check(CLI::ExistingFile);
  energy->add_option("-o,--out", energy_out);
  energy->add_flag("--all-evaluators", all_evaluators);
  Flags& energy_flags = flags_for(energy);

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Path-straightened geodesic between two surfaces");
  std::string geo_in1, geo_in2, geo_out, geo_trace, geo_obj_dir;
  geo->add_option("first", geo_in1)->required()->check(CLI::ExistingFile);
  geo->add_option("second", geo_in2)->required()->check(CLI::ExistingFile);
  geo->add_option("-o,--out", geo_out)->required();
  geo->add_option("--trace", geo_trace);
  geo->add_option("--obj-dir", geo_obj_dir);
  Flags& geo_flags = flags_for(geo);

  // distmat
  auto* dist = app.add_subcommand("distmat", "Pairwise geodesic distances of a directory of surfaces");
  std::string dist_dir, dist_out;
  dist->add_option("dir", dist_dir)->required();
  dist->add_option("-o,--out", dist_out)->required();
  Flags& dist_flags = flags_for(dist);

  // curvature
  auto* curv = app.add_subcommand("curvature", "Principal curvatures of a surface");
  std::string curv_in, curv_out, curv_estimator = "direct";
  curv->add_option("surface", curv_in)->required()->check(CLI::ExistingFile);
  curv->add_option("-o,--out", curv_out)->required();
  curv->add_option("--estimator", curv_estimator)->check(CLI::IsMember({"direct", "polyfit"}));
  Flags& curv_flags = flags_for(curv);

  // export-obj
  auto* obj = app.add_subcommand("export-obj", "Triangle mesh export with optional vertex scalars");
  std::string obj_in, obj_out, obj_scalar = "none", obj_estimator = "direct";
  obj->add_option("input", obj_in)->required()->check(CLI::ExistingFile);
  obj->add_option("-o,--out", obj_out)->required();
  obj->add_option("--scalar", obj_scalar)->check(CLI::IsMember({"none", "k1", "k2", "H", "K", "pole-distance"}));
  obj->add_option("--estimator", obj_estimator)->check(CLI::IsMember({"direct", "polyfit"}));
  Flags& obj_flags = flags_for(obj);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      Manifest manifest("gen");
      ShapeRecipe recipe;
      json rj{{"shape", gen_shape}, {"nu", gen_nu}, {"nv", gen_nv}, {"reparam", gen_reparam}};
      if (gen_shape == "sphere") {
        recipe.kind = Sphere{gen_radius};
        rj["radius"] = gen_radius;
      } else if (gen_shape == "ellipsoid") {
        recipe.kind = Ellipsoid{Vec3(gen_axes[0], gen_axes[1], gen_axes[2])};
        rj["axes"] = gen_axes;
      } else {
        recipe.kind = BumpSphere{gen_radius, gen_amplitude, gen_l, gen_m, Vec3(gen_stretch[0], gen_stretch[1], gen_stretch[2])};
        rj.update({{"radius", gen_radius}, {"amplitude", gen_amplitude}, {"l", gen_l}, {"m", gen_m}, {"stretch", gen_stretch}});
      }
      ReparamRecipe reparam = IdentityReparam{};
      if (gen_reparam == "rotation") {
        reparam = SphereRotation{Vec3(gen_axis[0], gen_axis[1], gen_axis[2]), gen_angle};
        rj.update({{"axis", gen_axis}, {"angle", gen_angle}});
      } else if (gen_reparam == "moebius") {
        reparam = Moebius{gen_alpha, {gen_beta[0], gen_beta[1]}};
        rj.update({{"alpha", gen_alpha}, {"beta", gen_beta}});
      } else if (gen_reparam == "vshift") {
        reparam = VShift{gen_shift};
        rj["shift"] = gen_shift;
      }
      if (gen_nu < 8 || gen_nv < 8) throw ValidationError("grid must be at least 8x8");
      write_surface(gen_out, generate(recipe, GridShape{gen_nu, gen_nv}, reparam));
      manifest.config(rj);
      manifest.output(gen_out);
      manifest.write(gen_out);
      return 0;
    }

    if (path_cmd->parsed()) {
      const SolverConfig cfg = solver_config(path_flags);
      Manifest manifest("path");
      std::vector<Surface> knots;
      for (const auto& in : path_inputs) {
        knots.push_back(read_surface(in));
        manifest.input(in);
      }
      write_path(path_out, piecewise_linear_path(knots, cfg.frames));
      manifest.config(config_json(cfg, path_flags));
      manifest.output(path_out);
      manifest.write(path_out);
      return 0;
    }

    if (align->parsed()) {
      const SolverConfig cfg = solver_config(align_flags);
      Manifest manifest("align");
      const Surface s1 = read_surface(align_in1), s2 = read_surface(align_in2);
      manifest.input(align_in1);
      manifest.input(align_in2);
      AlignOptions opts;
      opts.params = cfg.params;
      opts.margin = cfg.margin;
      const AlignedPair pair = align_pair(s1, s2, opts);
      const std::string out1 = align_out1.empty() ? shape_name(align_in1) + ".aligned.gis" : align_out1;
      const std::string out2 = align_out2.empty() ? shape_name(align_in2) + ".aligned.gis" : align_out2;
      const std::string report = align_report.empty() ? out2 + ".report.json" : align_report;
      write_surface(out1, pair.first);
      write_surface(out2, pair.second);
      write_text(report, alignment_json(pair.report).dump(2) + "\n");
      manifest.config(config_json(cfg, align_flags));
      for (const auto& o : {out1, out2, report}) manifest.output(o);
      manifest.write(report);
      return 0;
    }

    if (energy->parsed()) {
      SolverConfig cfg = solver_config(energy_flags);
      Manifest manifest("energy");
      const Path path = read_path(energy_in);
      path.validate();
      manifest.input(energy_in);
      json out;
      json timings = json::object();
      std::vector<Evaluator> which{cfg.evaluator};
      if (all_evaluators) which = {Evaluator::I_II, Evaluator::K1K2, Evaluator::POLYFIT, Evaluator::TRIANGLE};
      json table = json::array();
      for (Evaluator e : which) {
        const auto t0 = std::chrono::steady_clock::now();
        const EnergyBreakdown b = path_energy(path, cfg.params, cfg.margin, e, cfg.energy);
        timings[to_string(e)] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        table.push_back(energy_json(b, cfg));
      }
      out = all_evaluators ? json{{"evaluators", table}} : table.front();
      const std::string text = out.dump(2) + "\n";
      if (energy_out.empty()) {
        std::cout << text;
        std::cerr << "wall time: " << timings.dump() << "\n";
      } else {
        write_text(energy_out, text);
        manifest.config(config_json(cfg, energy_flags));
        manifest.output(energy_out);
        manifest.extra() = timings;
        manifest.write(energy_out);
      }
      return 0;
    }

    if (geo->parsed()) {
      const SolverConfig cfg = solver_config(geo_flags);
      Manifest manifest("geodesic");
      const Surface s1 = read_surface(geo_in1), s2 = read_surface(geo_in2);
      manifest.input(geo_in1);
      manifest.input(geo_in2);
      const GeodesicResult r = geodesic_distance(s1, s2, cfg);
      write_path(geo_out, r.path);
      const std::string trace_file = geo_trace.empty() ? geo_out + ".trace.json" : geo_trace;
      json report = trace_json(r.trace);
      report["distance"] = r.distance;
      if (r.alignment) report["alignment"] = alignment_json(*r.alignment);
      write_text(trace_file, report.dump(2) + "\n");
      manifest.config(config_json(cfg, geo_flags));
      manifest.output(geo_out);
      manifest.output(trace_file);
      if (!geo_obj_dir.empty()) {
        for (int k = 0; k < r.path.size(); ++k) {
          const fs::path f = fs::path(geo_obj_dir) / ("frame_" + std::to_string(k) + ".obj");
          write_text(f, encode_obj(r.path.frames[k]));
          manifest.output(f);
        }
      }
      json wall = json::array();
      for (const auto& it : r.trace.iterations) wall.push_back(it.wall);
      manifest.extra() = {{"iteration_wall_time", wall}};
      manifest.write(geo_out);
      std::cout << "distance " << r.distance << " (" << to_string(r.trace.reason) << ", "
                << r.trace.iterations.size() << " iterations)\n";
      return r.trace.reason == StopReason::MaxIter ? kNotConverged : 0;
    }

    if (dist->parsed()) {
      const SolverConfig cfg = solver_config(dist_flags);
      Manifest manifest("distmat");
      const std::vector<fs::path> files = surfaces_in(dist_dir);
      if (files.size() < 2) throw ValidationError("distmat needs at least two surfaces in " + dist_dir);
      std::vector<Surface> surfaces;
      for (const auto& f : files) {
        surfaces.push_back(read_surface(f));
        manifest.input(f);
      }
      const DistanceMatrix m = distance_matrix(surfaces, cfg);
      std::ostringstream csv;
      csv.precision(17);
      csv << "shape";
      for (const auto& f : files) csv << ',' << shape_name(f);
      csv << '\n';
      for (std::size_t i = 0; i < files.size(); ++i) {
        csv << shape_name(files[i]);
        for (std::size_t j = 0; j < files.size(); ++j) csv << ',' << m.distances(i, j);
        csv << '\n';
      }
      write_text(dist_out, csv.str());
      manifest.config(config_json(cfg, dist_flags));
      manifest.output(dist_out);
      manifest.write(dist_out);
      return m.converged ? 0 : kNotConverged;
    }

    if (curv->parsed()) {
      const SolverConfig cfg = solver_config(curv_flags);
      Manifest manifest("curvature");
      const Surface s = read_surface(curv_in);
      manifest.input(curv_in);
      const FundamentalForms forms =
          curv_estimator == "polyfit" ? second_form_polyfit(s, cfg.energy.polyfit_radius, cfg.margin)
                                     : second_form_direct(s);
      json out{{"estimator", curv_estimator},
               {"grid", {s.shape().nu, s.shape().nv}},
               {"pole_margin", cfg.margin.rows}};
      for (const auto& [name, field] : {std::pair<std::string, const ScalarField*>{"k1", &forms.k1},
                                        {"k2", &forms.k2}, {"H", &forms.H}, {"K", &forms.K}}) {
        double lo = 0, hi = 0, sum = 0;
        int count = 0;
        for (int i = cfg.margin.first_row(); i <= cfg.margin.last_row(s.shape()); ++i) {
          for (int j = 0; j < s.shape().nv; ++j) {
            const double x = (*field)(i, j);
            if (!std::isfinite(x)) continue;
            lo = count ? std::min(lo, x) : x;
            hi = count ? std::max(hi, x) : x;
            sum += x;
            ++count;
          }
        }
        out[name] = field->values();
        out["summary"][name] = {{"min", lo}, {"max", hi}, {"mean", count ? sum / count : 0.0}};
      }
      write_text(curv_out, out.dump() + "\n");
      manifest.config(config_json(cfg, curv_flags));
      manifest.output(curv_out);
      manifest.write(curv_out);
      return 0;
    }

    if (obj->parsed()) {
      const SolverConfig cfg = solver_config(obj_flags);
      Manifest manifest("export-obj");
      manifest.input(obj_in);
      std::vector<Surface> frames;
      if (is_path_file(obj_in)) {
        frames = read_path(obj_in).frames;
      } else {
        frames.push_back(read_surface(obj_in));
      }
      for (std::size_t k = 0; k < frames.size(); ++k) {
        fs::path out = obj_out;
        if (frames.size() > 1) {
          out = fs::path(obj_out).parent_path() /
                (fs::path(obj_out).stem().string() + "_" + std::to_string(k) + ".obj");
        }
        if (obj_scalar == "none") {
          write_text(out, encode_obj(frames[k]));
        } else {
          const ScalarField f = scalar_field(frames[k], obj_scalar, obj_estimator, cfg);
          write_text(out, encode_obj(frames[k], &f));
        }
        manifest.output(out);
      }
      manifest.config(json{{"scalar", obj_scalar},
                           {"estimator", obj_estimator},
                           {"pole_margin", cfg.margin.rows},
                           {"polyfit_radius", cfg.energy.polyfit_radius}});
      manifest.write(obj_out);
      return 0;
    }
  } catch (const NonUniformGrid& e) {
    std::cerr << "error: " << e.what() << " (frame " << e.frame() << ")\n";
    return e.exit_code();
  } catch (const DegenerateMetric& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
