#include "voxellate/tessellate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "voxellate/cost.hpp"
#include "voxellate/detail/ball_scan.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace voxellate {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Radius of a ball that reaches every point of the domain from any interior
// site: half the diagonal under periodic wrap, the full diagonal otherwise.
double cover_radius(const Domain& domain) {
  double s = 0.0;
  for (double L : domain.lengths) s += L * L;
  const double diag = std::sqrt(s);
  return domain.periodic() ? 0.5 * diag : diag;
}

// Scans all sites for each selected voxel (all of them, or only those still
// unassigned), writing the winning site and its ranking value.  Ties keep the
// lowest site index (strict-< update over ascending site order).  Returns the
// number of voxels resolved.
template <Kind K, bool Periodic>
std::int64_t resolve_voxels_impl(const SiteSet& sites, const VoxelGrid& grid,
                                 std::uint32_t* labels, double* values,
                                 bool only_unassigned) {
  const int d = grid.dim();
  const std::int64_t nv = grid.voxel_count();
  const std::int64_t ns = sites.count();
  const double* lengths = grid.domain.lengths.data();
  const double* inv_lengths = grid.domain.inv_lengths.data();
  const double* pos = sites.positions.data();
  const double* times = sites.times.empty() ? nullptr : sites.times.data();
  const double growth = sites.growth;

  std::int64_t resolved = 0;
#pragma omp parallel for schedule(static) reduction(+ : resolved)
  for (std::int64_t lin = 0; lin < nv; ++lin) {
    if (only_unassigned && labels[lin] != kUnassignedLabel) continue;
    std::int64_t idx[kMaxDim];
    double x[kMaxDim];
    grid.decompose(lin, idx);
    grid.center(idx, x);

    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_label = kUnassignedLabel;
    for (std::int64_t s = 0; s < ns; ++s) {
      const double dsq = Periodic
                             ? l_periodic_distance_sq(x, pos + s * d, d, lengths, inv_lengths)
                             : euclidean_distance_sq(x, pos + s * d, d);
      const double prox = proximity_from_dsq(K, dsq, growth, times ? times[s] : 0.0);
      if (prox < best) {
        best = prox;
        best_label = static_cast<std::uint32_t>(s);
      }
    }
    labels[lin] = best_label;
    values[lin] = best;
    ++resolved;
  }
  return resolved;
}

std::int64_t resolve_voxels(const SiteSet& sites, const VoxelGrid& grid,
                            std::uint32_t* labels, double* values, bool only_unassigned) {
  const bool periodic = grid.domain.periodic();
  switch (sites.kind) {
    case Kind::Voronoi:
      return periodic ? resolve_voxels_impl<Kind::Voronoi, true>(sites, grid, labels, values,
                                                                 only_unassigned)
                      : resolve_voxels_impl<Kind::Voronoi, false>(sites, grid, labels, values,
                                                                  only_unassigned);
    case Kind::JohnsonMehl:
      return periodic ? resolve_voxels_impl<Kind::JohnsonMehl, true>(sites, grid, labels, values,
                                                                     only_unassigned)
                      : resolve_voxels_impl<Kind::JohnsonMehl, false>(sites, grid, labels, values,
                                                                      only_unassigned);
    case Kind::Laguerre:
      return periodic ? resolve_voxels_impl<Kind::Laguerre, true>(sites, grid, labels, values,
                                                                  only_unassigned)
                      : resolve_voxels_impl<Kind::Laguerre, false>(sites, grid, labels, values,
                                                                   only_unassigned);
  }
  return 0;
}

// Step 1: each worker owns a slab of the last axis and walks all sites in
// ascending order, so the per-voxel update sequence — and therefore every
// label, value, and counter — is independent of the worker count.
template <Kind K>
std::uint64_t step1_scan(const SiteSet& sites, const VoxelGrid& grid,
                         const std::vector<double>& radii, double cutoff,
                         std::uint32_t* labels, double* values) {
  const std::int64_t ns = sites.count();
  const std::int64_t n_last = grid.counts[grid.dim() - 1];
  const double growth = sites.growth;
  std::uint64_t total = 0;

#pragma omp parallel reduction(+ : total)
  {
    int tid = 0;
    int nth = 1;
#ifdef _OPENMP
    tid = omp_get_thread_num();
    nth = omp_get_num_threads();
#endif
    const std::int64_t slab_lo = n_last * tid / nth;
    const std::int64_t slab_hi = n_last * (tid + 1) / nth;
    if (slab_lo < slab_hi) {
      detail::ScanScratch scratch;
      for (std::int64_t s = 0; s < ns; ++s) {
        if (radii[s] < 0.0) continue;  // born after the cutoff time: no ball
        const double ts = K == Kind::Voronoi ? 0.0 : sites.times[s];
        const std::uint32_t lab = static_cast<std::uint32_t>(s);
        auto update = [&](std::int64_t lin, double dsq) {
          const double prox = proximity_from_dsq(K, dsq, growth, ts);
          if (prox <= cutoff) {
            ++total;
            if (prox < values[lin]) {
              values[lin] = prox;
              labels[lin] = lab;
            }
          }
        };
        detail::for_each_window_voxel(sites.pos(s), radii[s], grid, slab_lo, slab_hi, scratch,
                                      update);
      }
    }
  }
  return total;
}

std::uint64_t step1_dispatch(const SiteSet& sites, const VoxelGrid& grid,
                             const std::vector<double>& radii, double cutoff,
                             std::uint32_t* labels, double* values) {
  switch (sites.kind) {
    case Kind::Voronoi:
      return step1_scan<Kind::Voronoi>(sites, grid, radii, cutoff, labels, values);
    case Kind::JohnsonMehl:
      return step1_scan<Kind::JohnsonMehl>(sites, grid, radii, cutoff, labels, values);
    case Kind::Laguerre:
      return step1_scan<Kind::Laguerre>(sites, grid, radii, cutoff, labels, values);
  }
  return 0;
}

void sqrt_values_in_place(std::vector<double>& values) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) values[i] = std::sqrt(values[i]);
}

TessResult make_result(const VoxelGrid& grid) {
  TessResult out;
  out.labels.grid = grid;
  out.distances.grid = grid;
  out.labels.labels.assign(static_cast<std::size_t>(grid.voxel_count()), kUnassignedLabel);
  out.distances.values.assign(static_cast<std::size_t>(grid.voxel_count()),
                              std::numeric_limits<double>::infinity());
  return out;
}

void check_inputs(const SiteSet& sites, const VoxelGrid& grid) {
  sites.validate(grid.domain);
  require(sites.count() < static_cast<std::int64_t>(kUnassignedLabel),
          "site count exceeds the 32-bit label range");
}

}  // namespace

TessResult tessellate_brute(const SiteSet& sites, const VoxelGrid& grid) {
  check_inputs(sites, grid);
  TessResult out = make_result(grid);
  resolve_voxels(sites, grid, out.labels.labels.data(), out.distances.values.data(), false);
  out.counters.step1_evals = 0;
  out.counters.step2_evals =
      static_cast<std::uint64_t>(grid.voxel_count()) * static_cast<std::uint64_t>(sites.count());
  if (sites.kind == Kind::Voronoi) sqrt_values_in_place(out.distances.values);
  return out;
}

TessResult tessellate_fast(const SiteSet& sites, const VoxelGrid& grid,
                           const FastOptions& options) {
  check_inputs(sites, grid);
  const int d = grid.dim();

  // Optional preprocessing for timed kinds: drop sites that can never own a
  // voxel.  Labels are remapped back to original site indices at the end.
  const SiteSet* work = &sites;
  SiteSet pruned_storage;
  std::vector<std::int64_t> kept;
  if (sites.timed() && options.prune) {
    PruneResult pr = prune_ineffective_sites(sites, grid.domain);
    if (!pr.removed.empty()) {
      pruned_storage = std::move(pr.sites);
      kept = std::move(pr.kept);
      work = &pruned_storage;
    }
  }
  const std::int64_t ns = work->count();

  // Investigation-ball parameter: common radius r0 for Voronoi, fictitious
  // time t0 for timed kinds.
  double param;
  if (sites.kind == Kind::Voronoi) {
    if (options.override_param) {
      param = *options.override_param;
      require(std::isfinite(param) && param > 0.0, "override r0 must be positive");
    } else if (ns == 1) {
      param = cover_radius(grid.domain);
    } else {
      param = radius_from_volume(optimal_v0(ns, grid.domain.volume()), d);
    }
  } else {
    const double t_min = *std::min_element(work->times.begin(), work->times.end());
    if (options.override_param) {
      param = *options.override_param;
      require(std::isfinite(param) && param >= t_min,
              "override t0 must not precede the earliest birth time");
    } else if (ns == 1) {
      param = t0_bracket(*work, grid.domain).hi;
    } else {
      param = search_optimal_t0(*work, grid);
    }
  }

  // Per-site ball radii and the shared membership cutoff.  Membership is
  // tested on the same floating-point ranking value the winner comparison
  // uses, which makes step-1 assignments provably consistent with the full
  // argmin: any voxel inside some ball is inside the true winner's ball too.
  std::vector<double> radii(static_cast<std::size_t>(ns));
  double cutoff;
  if (sites.kind == Kind::Voronoi) {
    cutoff = param * param;
    std::fill(radii.begin(), radii.end(), param);
  } else {
    cutoff = param;
    for (std::int64_t s = 0; s < ns; ++s) {
      const double dt = param - work->times[s];
      if (dt < 0.0) {
        radii[s] = -1.0;
      } else {
        radii[s] = sites.kind == Kind::JohnsonMehl ? work->growth * dt
                                                   : std::sqrt(work->growth * dt);
      }
    }
  }

  TessResult out = make_result(grid);
  out.param = param;
  out.counters.step1_evals = step1_dispatch(*work, grid, radii, cutoff,
                                            out.labels.labels.data(),
                                            out.distances.values.data());

  const std::int64_t unassigned = resolve_voxels(*work, grid, out.labels.labels.data(),
                                                 out.distances.values.data(), true);
  out.counters.step2_evals = static_cast<std::uint64_t>(unassigned) * static_cast<std::uint64_t>(ns);

  if (sites.kind == Kind::Voronoi) sqrt_values_in_place(out.distances.values);

  if (!kept.empty()) {
    const std::int64_t nv = grid.voxel_count();
    std::uint32_t* labels = out.labels.labels.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nv; ++i)
      labels[i] = static_cast<std::uint32_t>(kept[labels[i]]);
  }
  return out;
}

void scan_ball(const Point& center, double radius, const VoxelGrid& grid,
               const std::function<void(std::int64_t)>& visit) {
  require(static_cast<int>(center.size()) == grid.dim(),
          "ball center dimension does not match the grid");
  require(std::isfinite(radius) && radius >= 0.0, "ball radius must be nonnegative");
  const double rsq = radius * radius;
  detail::ScanScratch scratch;
  detail::for_each_window_voxel(center.data(), radius, grid, 0, grid.counts[grid.dim() - 1],
                                scratch, [&](std::int64_t lin, double dsq) {
                                  if (dsq <= rsq) visit(lin);
                                });
}

std::vector<std::int64_t> ball_voxels(const Point& center, double radius,
                                      const VoxelGrid& grid) {
  std::vector<std::int64_t> out;
  scan_ball(center, radius, grid, [&](std::int64_t lin) { out.push_back(lin); });
  return out;
}

ValidationReport validate_partition(const LabelImage& labels, const DistanceImage* distances,
                                    const SiteSet& sites, std::int64_t sample,
                                    std::uint64_t seed) {
  const VoxelGrid& grid = labels.grid;
  check_inputs(sites, grid);
  const std::int64_t nv = grid.voxel_count();
  require(static_cast<std::int64_t>(labels.labels.size()) == nv,
          "label image size does not match its grid");
  if (distances)
    require(static_cast<std::int64_t>(distances->values.size()) == nv,
            "distance image size does not match the label image");

  std::vector<std::int64_t> chosen;
  if (sample <= 0 || sample >= nv) {
    chosen.resize(static_cast<std::size_t>(nv));
    for (std::int64_t i = 0; i < nv; ++i) chosen[i] = i;
  } else {
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, nv - 1);
    chosen.resize(static_cast<std::size_t>(sample));
    for (auto& c : chosen) c = pick(eng);
  }

  const int d = grid.dim();
  const bool periodic = grid.domain.periodic();
  const double* lengths = grid.domain.lengths.data();
  const double* inv_lengths = grid.domain.inv_lengths.data();

  ValidationReport report;
  for (std::int64_t lin : chosen) {
    std::int64_t idx[kMaxDim];
    double x[kMaxDim];
    grid.decompose(lin, idx);
    grid.center(idx, x);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_label = kUnassignedLabel;
    for (std::int64_t s = 0; s < sites.count(); ++s) {
      const double dsq = periodic
                             ? l_periodic_distance_sq(x, sites.pos(s), d, lengths, inv_lengths)
                             : euclidean_distance_sq(x, sites.pos(s), d);
      const double prox =
          proximity_from_dsq(sites.kind, dsq, sites.growth, sites.timed() ? sites.times[s] : 0.0);
      if (prox < best) {
        best = prox;
        best_label = static_cast<std::uint32_t>(s);
      }
    }
    ++report.voxels_checked;
    bool bad = false;
    if (labels.labels[static_cast<std::size_t>(lin)] != best_label) {
      ++report.label_mismatches;
      bad = true;
    }
    if (distances) {
      const double expected = sites.kind == Kind::Voronoi ? std::sqrt(best) : best;
      if (distances->values[static_cast<std::size_t>(lin)] != expected) {
        ++report.value_mismatches;
        bad = true;
      }
    }
    if (bad && report.examples.size() < 16) report.examples.push_back(lin);
  }
  return report;
}

}  // namespace voxellate
