#include "voxellate/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "voxellate/cost.hpp"
#include "voxellate/image_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace voxellate {

namespace {

double wall_seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Model-predicted step-1 + step-2 evaluations for the configuration the user
// asked for (the full input site set; internal pruning is an optimization the
// model deliberately ignores).
double model_cost(const SiteSet& sites, const VoxelGrid& grid, double param) {
  if (sites.kind != Kind::Voronoi) return growth_cost(param, sites, grid);
  const double V = grid.domain.volume();
  CostModel model{grid.voxel_count(), sites.count(), V};
  const double v0 = std::min(V, ball_volume(param, grid.dim()));
  return voronoi_cost(v0, model);
}

MetricsRow make_row(const RunConfig& config, const SiteSet& sites, const VoxelGrid& grid,
                    const TessResult& result, double wall) {
  MetricsRow row;
  row.run_id = config.run_id;
  row.kind = sites.kind;
  row.n_voxels = grid.voxel_count();
  row.n_sites = sites.count();
  row.param = result.param;
  row.step1_evals = result.counters.step1_evals;
  row.step2_evals = result.counters.step2_evals;
  row.model_step12 = std::isfinite(result.param)
                         ? model_cost(sites, grid, result.param)
                         : static_cast<double>(grid.voxel_count()) *
                               static_cast<double>(sites.count());
  row.wall_seconds = wall;
  return row;
}

void print_summary(std::ostream& out, const RunConfig& config, const SiteSet& sites,
                   const VoxelGrid& grid, const TessResult& result, double wall) {
  if (config.quiet) return;
  out << "kind=" << to_string(sites.kind) << " engine=" << (config.engine_fast ? "fast" : "brute")
      << " boundary=" << to_string(grid.domain.boundary) << " dims=";
  for (int i = 0; i < grid.dim(); ++i) out << (i ? "x" : "") << grid.counts[i];
  out << " N_v=" << grid.voxel_count() << " N_s=" << sites.count();
  if (std::isfinite(result.param))
    out << (sites.kind == Kind::Voronoi ? " r0=" : " t0=") << result.param;
  out << " step1_evals=" << result.counters.step1_evals
      << " step2_evals=" << result.counters.step2_evals << " wall=" << wall << "s\n";
}

}  // namespace

SiteSet load_or_generate_sites(const RunConfig& config, const Domain& domain) {
  if (!config.site_file.empty()) {
    SiteFile file = read_site_file(config.site_file);
    SiteSet sites;
    if (file.is_spheres) {
      if (config.kind != Kind::Laguerre)
        throw std::invalid_argument("sphere site files describe a laguerre tessellation");
      if (!(config.growth > 0.0))
        throw std::invalid_argument("sphere site files need --growth to map radii to times");
      sites = spheres_to_timed_sites(file.spheres, config.growth);
    } else {
      sites = std::move(file.sites);
      if (sites.kind != config.kind)
        throw std::invalid_argument("site file kind '" + to_string(sites.kind) +
                                    "' does not match the requested tessellation kind");
    }
    sites.validate(domain);
    return sites;
  }
  if (config.n_sites <= 0)
    throw std::invalid_argument("specify a positive site count or a site file");
  return generate_uniform_sites(domain, config.n_sites, config.kind, config.growth,
                                config.horizon, static_cast<std::uint64_t>(config.seed));
}

VoxelGrid make_grid(const RunConfig& config) {
  if (config.dims.empty()) throw std::invalid_argument("grid dimensions are required");
  std::vector<double> lengths = config.lengths;
  if (lengths.empty()) lengths.assign(config.dims.size(), 1.0);
  return VoxelGrid(config.dims, Domain(std::move(lengths), config.boundary));
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
    const VoxelGrid grid = make_grid(config);
    const SiteSet sites = load_or_generate_sites(config, grid.domain);

    std::vector<MetricsRow> rows;

    if (config.sweep) {
      if (!config.engine_fast)
        throw std::invalid_argument("parameter sweeps require the fast engine");
      const SweepSpec& sweep = *config.sweep;
      if (sweep.n < 1 || !(sweep.hi >= sweep.lo))
        throw std::invalid_argument("sweep needs lo <= hi and at least one sample");
      for (int i = 0; i < sweep.n; ++i) {
        const double param =
            sweep.n == 1 ? sweep.lo : sweep.lo + (sweep.hi - sweep.lo) * i / (sweep.n - 1);
        FastOptions options;
        options.override_param = param;
        options.prune = config.prune;
        const auto start = std::chrono::steady_clock::now();
        const TessResult result = tessellate_fast(sites, grid, options);
        const double wall = wall_seconds_since(start);
        rows.push_back(make_row(config, sites, grid, result, wall));
        print_summary(out, config, sites, grid, result, wall);
      }
    } else {
      const auto start = std::chrono::steady_clock::now();
      TessResult result;
      if (config.engine_fast) {
        FastOptions options;
        options.override_param = config.override_param;
        options.prune = config.prune;
        result = tessellate_fast(sites, grid, options);
      } else {
        result = tessellate_brute(sites, grid);
      }
      const double wall = wall_seconds_since(start);
      rows.push_back(make_row(config, sites, grid, result, wall));
      print_summary(out, config, sites, grid, result, wall);

      ImageMeta meta;
      meta.kind = sites.kind;
      meta.n_sites = sites.count();
      meta.seed = config.site_file.empty() ? config.seed : -1;
      if (!config.out_labels.empty()) {
        meta.type = "labels";
        write_label_image(config.out_labels, result.labels, meta);
        if (!config.quiet) out << "wrote labels to " << config.out_labels << "\n";
      }
      if (!config.out_distances.empty()) {
        meta.type = "distances";
        write_distance_image(config.out_distances, result.distances, meta);
        if (!config.quiet) out << "wrote distances to " << config.out_distances << "\n";
      }
    }

    if (!config.out_metrics.empty()) {
      emit_metrics(config.out_metrics, rows);
      if (!config.quiet) out << "wrote metrics to " << config.out_metrics << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace voxellate
