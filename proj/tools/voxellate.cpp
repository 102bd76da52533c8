// Command-line front end: rasterize Voronoi / Johnson-Mehl / Laguerre
// tessellations into voxel images, sweep cost curves, validate outputs, and
// export 2-D slices.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "voxellate/cost.hpp"
#include "voxellate/image_io.hpp"
#include "voxellate/run.hpp"

namespace {

using namespace voxellate;

int default_threads() {
  if (const char* env = std::getenv("VOXELLATE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec sweep;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> sweep.lo >> c1 >> sweep.hi >> c2 >> sweep.n) || c1 != ':' || c2 != ':' ||
      !in.eof())
    throw CLI::ValidationError("--sweep expects lo:hi:n, e.g. 0.04:0.4:13");
  if (sweep.n < 1) throw CLI::ValidationError("--sweep needs at least one sample");
  return sweep;
}

// Options shared by every command that builds a grid and a site set.
void add_problem_options(CLI::App* cmd, RunConfig& config, std::string& sweep_text,
                         bool with_kind) {
  if (with_kind) {
    cmd->add_option_function<std::string>(
           "--kind", [&config](const std::string& s) { config.kind = kind_from_string(s); },
           "Tessellation kind: voronoi, johnson-mehl, laguerre")
        ->required();
  }
  cmd->add_option("--dims", config.dims, "Voxels per axis, e.g. 64,64,64")
      ->required()
      ->delimiter(',');
  cmd->add_option("--lengths", config.lengths, "Domain edge lengths (default: 1 per axis)")
      ->delimiter(',');
  auto* periodic = cmd->add_flag_callback(
      "--periodic", [&config] { config.boundary = Boundary::Periodic; },
      "Periodic boundaries (default)");
  cmd->add_flag_callback(
         "--non-periodic", [&config] { config.boundary = Boundary::NonPeriodic; },
         "Non-periodic boundaries")
      ->excludes(periodic);
  auto* sites_opt =
      cmd->add_option("--sites", config.n_sites, "Generate this many uniform random sites");
  cmd->add_option("--site-file", config.site_file, "Read sites from a file instead")
      ->excludes(sites_opt);
  cmd->add_option("--growth", config.growth, "Growth rate G (timed kinds and sphere files)");
  cmd->add_option("--horizon", config.horizon,
                  "Birth-time horizon T for generated timed sites (default 1)");
  cmd->add_option("--seed", config.seed, "Random seed for site generation (default 0)");
  cmd->add_option("--sweep", sweep_text, "Sweep the ball parameter: lo:hi:n");
}

void add_run_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option_function<std::string>(
      "--engine",
      [&config](const std::string& s) {
        if (s == "fast")
          config.engine_fast = true;
        else if (s == "brute")
          config.engine_fast = false;
        else
          throw CLI::ValidationError("--engine must be fast or brute");
      },
      "Engine: fast (default) or brute");
  cmd->add_option("--r0", "Override the Voronoi investigation-ball radius");
  cmd->add_option("--t0", "Override the fictitious time for timed kinds");
  cmd->add_flag_callback(
      "--no-prune", [&config] { config.prune = false; },
      "Keep ineffective sites (timed kinds)");
  cmd->add_option("--threads", config.threads,
                  "Worker threads (default: VOXELLATE_THREADS or runtime)");
  cmd->add_option("--out-labels", config.out_labels, "Write the label image here");
  cmd->add_option("--out-distances", config.out_distances, "Write the distance image here");
  cmd->add_option("--out-metrics", config.out_metrics, "Write the metrics CSV here");
  cmd->add_option("--run-id", config.run_id, "Identifier for metrics rows (default 'run')");
  cmd->add_flag("--quiet", config.quiet, "Suppress the summary line");
}

int finish_run_config(CLI::App* cmd, RunConfig& config, const std::string& sweep_text) {
  if (config.kind == Kind::Voronoi) {
    if (cmd->count("--t0") > 0)
      throw CLI::ValidationError("--t0 applies to johnson-mehl/laguerre; use --r0");
    if (cmd->count("--r0") > 0) config.override_param = cmd->get_option("--r0")->as<double>();
  } else {
    if (cmd->count("--r0") > 0)
      throw CLI::ValidationError("--r0 applies to voronoi; use --t0");
    if (cmd->count("--t0") > 0) config.override_param = cmd->get_option("--t0")->as<double>();
    if (config.site_file.empty() && !(config.growth > 0.0))
      throw CLI::ValidationError("timed kinds need --growth > 0");
  }
  if (!sweep_text.empty()) config.sweep = parse_sweep(sweep_text);
  if (config.threads == 0) config.threads = default_threads();
  return run(config, std::cout, std::cerr);
}

int cost_curve_main(RunConfig& config, const std::string& sweep_text, int samples,
                    const std::string& out_path) {
  const VoxelGrid grid = make_grid(config);
  if (config.kind != Kind::Voronoi && config.site_file.empty() && !(config.growth > 0.0))
    throw CLI::ValidationError("timed kinds need --growth > 0");
  const SiteSet sites = load_or_generate_sites(config, grid.domain);
  const double V = grid.domain.volume();
  const int d = grid.dim();

  double lo, hi;
  if (!sweep_text.empty()) {
    const SweepSpec sweep = parse_sweep(sweep_text);
    lo = sweep.lo;
    hi = sweep.hi;
    samples = sweep.n;
  } else if (sites.kind == Kind::Voronoi) {
    hi = radius_from_volume(V, d);
    lo = hi / samples;
  } else {
    const T0Bracket bracket = t0_bracket(sites, grid.domain);
    lo = bracket.lo;
    hi = bracket.hi;
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "param,model_cost\n";
  CostModel model{grid.voxel_count(), sites.count(), V};
  for (int i = 0; i < samples; ++i) {
    const double param = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
    double cost;
    if (sites.kind == Kind::Voronoi) {
      const double v0 = std::min(V, ball_volume(param, d));
      cost = voronoi_cost(v0, model);
    } else {
      cost = growth_cost(param, sites, grid);
    }
    csv << param << ',' << cost << '\n';
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << csv.str();
    std::cout << "wrote cost curve to " << out_path << "\n";
  }
  return 0;
}

int validate_main(const std::string& labels_path, const std::string& distances_path,
                  const std::string& site_path, double growth, std::int64_t sample,
                  std::uint64_t seed) {
  LabelImage labels = read_label_image(labels_path);
  DistanceImage distances;
  const bool with_distances = !distances_path.empty();
  if (with_distances) distances = read_distance_image(distances_path);

  SiteFile file = read_site_file(site_path);
  SiteSet sites;
  if (file.is_spheres) {
    if (!(growth > 0.0))
      throw std::runtime_error("sphere site files need --growth to map radii to times");
    sites = spheres_to_timed_sites(file.spheres, growth);
  } else {
    sites = std::move(file.sites);
  }

  const ValidationReport report = validate_partition(
      labels, with_distances ? &distances : nullptr, sites, sample, seed);
  std::cout << "checked " << report.voxels_checked << " voxels: " << report.label_mismatches
            << " label mismatches, " << report.value_mismatches << " value mismatches\n";
  for (std::int64_t lin : report.examples) std::cout << "  mismatch at voxel " << lin << "\n";
  return report.ok() ? 0 : 2;
}

int slice_main(const std::string& labels_path, const std::string& distances_path, int axis,
               std::int64_t index, const std::string& out_path, std::uint64_t palette_seed) {
  if (labels_path.empty() == distances_path.empty())
    throw std::runtime_error("pass exactly one of --labels or --distances");
  if (!labels_path.empty()) {
    export_slice(read_label_image(labels_path), axis, index, out_path, palette_seed);
  } else {
    export_slice(read_distance_image(distances_path), axis, index, out_path);
  }
  std::cout << "wrote slice to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voxel rasterizer for Voronoi, Johnson-Mehl, and Laguerre tessellations"};
  app.require_subcommand(1);

  struct TessCmd {
    CLI::App* cmd = nullptr;
    RunConfig config;
    std::string sweep_text;
  };
  std::vector<std::unique_ptr<TessCmd>> tess_cmds;

  auto add_tess_cmd = [&](const std::string& name, const std::string& help, bool with_kind,
                          Kind kind) {
    auto holder = std::make_unique<TessCmd>();
    holder->cmd = app.add_subcommand(name, help);
    holder->config.kind = kind;
    add_problem_options(holder->cmd, holder->config, holder->sweep_text, with_kind);
    add_run_options(holder->cmd, holder->config);
    tess_cmds.push_back(std::move(holder));
    return tess_cmds.back().get();
  };

  add_tess_cmd("voronoi", "Rasterize a Voronoi tessellation", false, Kind::Voronoi);
  add_tess_cmd("johnson-mehl", "Rasterize a Johnson-Mehl tessellation", false,
               Kind::JohnsonMehl);
  add_tess_cmd("laguerre", "Rasterize a Laguerre tessellation", false, Kind::Laguerre);
  add_tess_cmd("run", "Rasterize a tessellation of the given --kind", true, Kind::Voronoi);

  // cost-curve
  RunConfig curve_config;
  std::string curve_sweep;
  int curve_samples = 33;
  std::string curve_out;
  CLI::App* curve = app.add_subcommand("cost-curve", "Emit the model cost curve as CSV");
  add_problem_options(curve, curve_config, curve_sweep, true);
  curve->add_option("--samples", curve_samples, "Number of curve samples (default 33)");
  curve->add_option("--out", curve_out, "Output CSV path (default: stdout)");

  // validate
  std::string v_labels, v_distances, v_sites;
  double v_growth = 0.0;
  std::int64_t v_sample = 0;
  std::uint64_t v_seed = 0;
  CLI::App* validate = app.add_subcommand("validate", "Check an image against its sites");
  validate->add_option("--labels", v_labels, "Label image to check")->required();
  validate->add_option("--distances", v_distances, "Distance image to check alongside");
  validate->add_option("--site-file", v_sites, "Sites that produced the image")->required();
  validate->add_option("--growth", v_growth, "G for sphere site files");
  validate->add_option("--sample", v_sample, "Check this many random voxels (0 = all)");
  validate->add_option("--seed", v_seed, "Sampling seed");

  // slice
  std::string s_labels, s_distances, s_out;
  int s_axis = 0;
  std::int64_t s_index = 0;
  std::uint64_t s_palette = 0;
  CLI::App* slice = app.add_subcommand("slice", "Export a 2-D slice as PPM/PGM");
  slice->add_option("--labels", s_labels, "Label image to slice");
  slice->add_option("--distances", s_distances, "Distance image to slice");
  slice->add_option("--axis", s_axis, "Axis to fix (3-D images)");
  slice->add_option("--index", s_index, "Voxel index along the fixed axis");
  slice->add_option("--out", s_out, "Output PPM/PGM path")->required();
  slice->add_option("--palette-seed", s_palette, "Seed for the label color palette");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& holder : tess_cmds)
      if (holder->cmd->parsed())
        return finish_run_config(holder->cmd, holder->config, holder->sweep_text);
    if (curve->parsed()) {
      if (curve_config.threads == 0) curve_config.threads = default_threads();
      return cost_curve_main(curve_config, curve_sweep, curve_samples, curve_out);
    }
    if (validate->parsed())
      return validate_main(v_labels, v_distances, v_sites, v_growth, v_sample, v_seed);
    if (slice->parsed()) return slice_main(s_labels, s_distances, s_axis, s_index, s_out, s_palette);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
