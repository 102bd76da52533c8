#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "voxellate/geometry.hpp"

namespace voxellate {

// A set of tessellation sites.  Positions are stored flat (row per site) for
// cache-friendly scanning.  Birth times are present for Johnson-Mehl and
// Laguerre sites only; `growth` is the common growth rate G.
struct SiteSet {
  Kind kind = Kind::Voronoi;
  int dim = 0;
  std::vector<double> positions;  // count() * dim
  std::vector<double> times;      // count() for JM/Laguerre, empty for Voronoi
  double growth = 0.0;

  std::int64_t count() const {
    return dim == 0 ? 0 : static_cast<std::int64_t>(positions.size()) / dim;
  }
  const double* pos(std::int64_t s) const { return positions.data() + s * dim; }
  bool timed() const { return kind != Kind::Voronoi; }

  // Throws std::invalid_argument on inconsistent sizes, non-positive G for
  // timed kinds, or positions not strictly inside the domain.
  void validate(const Domain& domain) const;
};

// Laguerre input in its native form: sphere centers and radii.
struct LaguerreSpheres {
  int dim = 0;
  std::vector<double> positions;  // count() * dim
  std::vector<double> radii;

  std::int64_t count() const {
    return dim == 0 ? 0 : static_cast<std::int64_t>(positions.size()) / dim;
  }
};

// Sites i.i.d. uniform over the domain (strictly inside; exact-boundary draws
// are redrawn).  For timed kinds, birth times i.i.d. uniform over [0, T).
// Deterministic per seed: site s draws its d coordinates then its time.
SiteSet generate_uniform_sites(const Domain& domain, std::int64_t n_sites, Kind kind,
                               double growth, double time_horizon, std::uint64_t seed);

// Sphere radii to birth times, t_s = -r_s^2 / G.  The resulting timed sites
// rank points exactly like the power distance d^2 - r_s^2.
SiteSet spheres_to_timed_sites(const LaguerreSpheres& spheres, double growth);

// Shifts all birth times by -t_ref.  Cell membership is invariant.
SiteSet shift_time_reference(const SiteSet& sites, double t_ref);

struct PruneResult {
  SiteSet sites;                      // surviving sites, original order
  std::vector<std::int64_t> removed;  // original indices of dropped sites
  std::vector<std::int64_t> kept;     // original index of each surviving site
};

// Removes sites that can never own a voxel, leaving the partition unchanged.
// Johnson-Mehl: a site overtaken at its own position before its birth time is
// dominated everywhere (triangle inequality, also on the periodic quotient).
// Laguerre growth is not metric, so the same test is unsound there; instead a
// site is dropped only if some other site's ranking value is <= its own at
// every point of the domain (closed-form per-axis minimum).  Exact ties keep
// the lower site index, matching the engines' tie-break.
PruneResult prune_ineffective_sites(const SiteSet& sites, const Domain& domain);

// Text site-file format.  Header `kind d N G` where kind is voronoi,
// johnson-mehl, laguerre, or spheres; then N rows of d coordinates plus a
// trailing t_s (johnson-mehl, laguerre) or r_s (spheres).  For voronoi the
// header G is written as 0 and ignored.
struct SiteFile {
  bool is_spheres = false;
  SiteSet sites;            // valid when !is_spheres
  LaguerreSpheres spheres;  // valid when is_spheres
};

SiteFile read_site_file(std::istream& in);
SiteFile read_site_file(const std::string& path);
void write_site_file(std::ostream& out, const SiteSet& sites);
void write_site_file(const std::string& path, const SiteSet& sites);
void write_sphere_file(std::ostream& out, const LaguerreSpheres& spheres);

}  // namespace voxellate
