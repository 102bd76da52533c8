#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "voxellate/geometry.hpp"
#include "voxellate/sites.hpp"

namespace voxellate {

inline constexpr std::uint32_t kUnassignedLabel = 0xFFFFFFFFu;

// Per-voxel winning site index, completed images carry values in [0, N_s).
struct LabelImage {
  VoxelGrid grid;
  std::vector<std::uint32_t> labels;
};

// Per-voxel ranking value of the winning site: true Euclidean distance for
// Voronoi (a distance-transform map), d/G + t_s for Johnson-Mehl,
// d^2/G + t_s for Laguerre.
struct DistanceImage {
  VoxelGrid grid;
  std::vector<double> values;
};

// Exact tallies of proximity evaluations in the two engine phases.
struct EvalCounters {
  std::uint64_t step1_evals = 0;
  std::uint64_t step2_evals = 0;
  std::uint64_t total() const { return step1_evals + step2_evals; }
};

struct TessResult {
  LabelImage labels;
  DistanceImage distances;
  EvalCounters counters;
  // r0 (Voronoi) or t0 (timed kinds) actually used; NaN for the brute engine.
  double param = std::numeric_limits<double>::quiet_NaN();
};

// Baseline: every voxel scans every site.  step1_evals = 0 and
// step2_evals = N_v * N_s exactly.
TessResult tessellate_brute(const SiteSet& sites, const VoxelGrid& grid);

struct FastOptions {
  // Fixes r0 (Voronoi) or t0 (timed kinds) instead of the model optimum.
  std::optional<double> override_param;
  // Timed kinds: drop sites that can never own a voxel before scanning.
  bool prune = true;
};

// Two-step engine: investigation balls around the sites first, full scans
// only for voxels no ball reached.  Labels and values are bit-identical to
// tessellate_brute for any inputs and any worker count.
TessResult tessellate_fast(const SiteSet& sites, const VoxelGrid& grid,
                           const FastOptions& options = {});

// Visits (exactly once) every voxel whose center lies within `radius` of
// `center`; periodic domains use wrapped distance, non-periodic domains
// truncate the ball at the boundary.
void scan_ball(const Point& center, double radius, const VoxelGrid& grid,
               const std::function<void(std::int64_t)>& visit);
std::vector<std::int64_t> ball_voxels(const Point& center, double radius,
                                      const VoxelGrid& grid);

struct ValidationReport {
  std::int64_t voxels_checked = 0;
  std::int64_t label_mismatches = 0;
  std::int64_t value_mismatches = 0;
  std::vector<std::int64_t> examples;  // first offending voxels (capped)
  bool ok() const { return label_mismatches == 0 && value_mismatches == 0; }
};

// Independent checker: recomputes the winning site for `sample` random voxels
// (all voxels when sample == 0) and reports label disagreements; when
// `distances` is non-null its values are checked against the recomputed
// winning proximity as well.
ValidationReport validate_partition(const LabelImage& labels, const DistanceImage* distances,
                                    const SiteSet& sites, std::int64_t sample = 0,
                                    std::uint64_t seed = 0);

}  // namespace voxellate
