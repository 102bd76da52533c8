#pragma once

#include <cstdint>

#include "voxellate/geometry.hpp"
#include "voxellate/sites.hpp"

namespace voxellate {

// Volume of a d-ball of radius r, pi^(d/2) r^d / Gamma(d/2 + 1).
double ball_volume(double r, int d);

// Inverse of ball_volume in r; round-trips to 1e-12 relative.
double radius_from_volume(double v, int d);

// Model inputs for the two-step engine cost.
struct CostModel {
  std::int64_t n_voxels = 0;  // N_v
  std::int64_t n_sites = 0;   // N_s
  double volume = 0.0;        // V
};

// Investigation-ball volume minimizing voronoi_cost: V * (1 - (1/N_s)^(1/(N_s-1))).
// Requires N_s >= 2 (a single site needs no search).
double optimal_v0(std::int64_t n_sites, double volume);

// Predicted distance evaluations of the two-step engine with common ball
// volume v0: N_s * N_v * (v0/V + (1 - v0/V)^N_s).
double voronoi_cost(double v0, const CostModel& model);

// Large-N_s limit of voronoi_cost at the optimal v0: N_v * (ln N_s + 1).
double asymptotic_voronoi_cost(std::int64_t n_voxels, std::int64_t n_sites);

// Predicted evaluations for timed tessellations with fictitious time t0.
// Ball radii r_s = G*(t0 - t_s)+ (Johnson-Mehl) or sqrt(G*(t0 - t_s)+)
// (Laguerre); with v'_s = min(V, ball_volume(r_s)) the cost is
// N_v * sum(v'_s)/V + N_s * N_v * prod(1 - v'_s/V).
double growth_cost(double t0, const SiteSet& sites, const VoxelGrid& grid);

// Search bracket for t0: [min t_s, min t_s + W] where W is the time for one
// crystal to cover the whole domain (periodic: half diagonal; non-periodic:
// full diagonal).
struct T0Bracket {
  double lo = 0.0;
  double hi = 0.0;
};
T0Bracket t0_bracket(const SiteSet& sites, const Domain& domain);

// Minimizes growth_cost over the bracket: coarse scan to locate the basin,
// then golden-section refinement inside it.
double search_optimal_t0(const SiteSet& sites, const VoxelGrid& grid);

}  // namespace voxellate
