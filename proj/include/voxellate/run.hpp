#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "voxellate/geometry.hpp"
#include "voxellate/tessellate.hpp"

namespace voxellate {

// A parameter sweep: n evenly spaced values of r0 or t0 over [lo, hi].
struct SweepSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

struct RunConfig {
  Kind kind = Kind::Voronoi;
  std::vector<std::int64_t> dims;
  std::vector<double> lengths;  // empty = unit lengths
  Boundary boundary = Boundary::Periodic;

  std::int64_t n_sites = 0;   // generate this many sites, or ...
  std::string site_file;      // ... load them from a file
  double growth = 0.0;        // G for timed kinds (and sphere conversion)
  double horizon = 1.0;       // T, birth times uniform over [0, T)
  std::int64_t seed = 0;

  bool engine_fast = true;
  std::optional<double> override_param;  // r0 or t0
  bool prune = true;
  int threads = 0;  // 0 = runtime default

  std::string out_labels;
  std::string out_distances;
  std::string out_metrics;
  std::string run_id = "run";
  std::optional<SweepSpec> sweep;  // metrics-only mode: one row per value
  bool quiet = false;
};

// Resolves the configured site source (generator, site file, or sphere file
// plus G).  Exposed for tests and the cost-curve command.
SiteSet load_or_generate_sites(const RunConfig& config, const Domain& domain);

VoxelGrid make_grid(const RunConfig& config);

// Executes one tessellation run (or a parameter sweep), writes the requested
// artifacts, and prints a summary to `out`.  Returns a process exit status;
// errors are reported on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace voxellate
