#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "voxellate/geometry.hpp"

namespace voxellate::detail {

// Reusable per-worker buffers for window enumeration (one candidate list per
// axis, plus linear strides).
struct ScanScratch {
  std::array<std::vector<std::int64_t>, kMaxDim> index;  // wrapped voxel index
  std::array<std::vector<double>, kMaxDim> rsq;          // squared axis residual
  std::array<std::int64_t, kMaxDim> stride;
};

// Safety factor applied to the scan radius.  The enumerated window must not
// miss any voxel the caller's exact membership test could accept; the factor
// absorbs every rounding step between that test and the index bounds (a few
// ulps — 1e-9 is orders of magnitude beyond, at negligible extra scan cost).
inline constexpr double kRadiusInflation = 1.0 + 1e-9;

template <class Fn>
void scan_recurse(const ScanScratch& sc, int level, std::int64_t base, double acc,
                  double rsq_prune, Fn& fn) {
  const auto& idx = sc.index[level];
  const auto& rsq = sc.rsq[level];
  if (level == 0) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double dsq = acc + rsq[j];
      if (dsq <= rsq_prune) fn(base + idx[j], dsq);
    }
    return;
  }
  const std::int64_t stride = sc.stride[level];
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double acc2 = acc + rsq[j];
    if (acc2 <= rsq_prune)
      scan_recurse(sc, level - 1, base + idx[j] * stride, acc2, rsq_prune, fn);
  }
}

// Calls fn(linear_index, dsq) for every voxel of a slight superset of the
// ball B(site, radius): all voxels with dsq <= (radius * kRadiusInflation)^2,
// each exactly once.  dsq is the exact squared distance (periodic wrap or
// plain Euclidean) from the voxel center to `site`, with per-axis terms
// accumulated from the last axis down to axis 0 — the same expressions and
// fold order as the point-distance kernels, so values are bit-identical to
// an independent recomputation.  Voxels whose last-axis index falls outside
// [slab_lo, slab_hi) are skipped; callers partition work along that axis.
template <class Fn>
void for_each_window_voxel(const double* site, double radius, const VoxelGrid& grid,
                           std::int64_t slab_lo, std::int64_t slab_hi,
                           ScanScratch& sc, Fn fn) {
  const int d = grid.dim();
  const bool periodic = grid.domain.periodic();
  const double rp = radius * kRadiusInflation;
  const double rsq_prune = rp * rp;

  std::int64_t stride = 1;
  for (int i = 0; i < d; ++i) {
    sc.stride[i] = stride;
    stride *= grid.counts[i];
  }

  for (int i = 0; i < d; ++i) {
    const std::int64_t n = grid.counts[i];
    const double h = grid.spacing[i];
    const double L = grid.domain.lengths[i];
    const double inv_L = grid.domain.inv_lengths[i];
    auto& idx = sc.index[i];
    auto& rsq = sc.rsq[i];
    idx.clear();
    rsq.clear();

    // Conservative index bounds for centers within rp of the site along this
    // axis; the slack absorbs rounding in the bound computation itself.
    const double tlo = (site[i] - rp) / h - 0.5;
    const double thi = (site[i] + rp) / h - 0.5;
    const double slack = 1e-9 * (std::fabs(tlo) + std::fabs(thi) + 1.0);
    const double dlo = std::ceil(tlo - slack);
    const double dhi = std::floor(thi + slack);
    if (dhi < dlo) return;  // empty window: no voxel can be in the ball

    const bool slab_axis = (i == d - 1);
    auto push = [&](std::int64_t kw) {
      if (slab_axis && (kw < slab_lo || kw >= slab_hi)) return;
      const double u = site[i] - grid.center_coord(i, kw);
      const double w = periodic ? wrap_delta(u, L, inv_L) : u;
      idx.push_back(kw);
      rsq.push_back(w * w);
    };

    if (periodic) {
      if (dhi - dlo + 1.0 >= static_cast<double>(n)) {
        // Window spans the whole axis; enumerate each wrapped index once.
        for (std::int64_t kw = 0; kw < n; ++kw) push(kw);
      } else {
        const auto lo = static_cast<std::int64_t>(dlo);
        const auto hi = static_cast<std::int64_t>(dhi);
        for (std::int64_t kk = lo; kk <= hi; ++kk) {
          std::int64_t kw = kk % n;
          if (kw < 0) kw += n;
          push(kw);
        }
      }
    } else {
      // Clamp in the double domain before casting: huge radii stay safe.
      const std::int64_t lo =
          dlo <= 0.0 ? 0 : static_cast<std::int64_t>(std::min(dlo, static_cast<double>(n)));
      const std::int64_t hi = dhi >= static_cast<double>(n - 1)
                                  ? n - 1
                                  : static_cast<std::int64_t>(std::max(dhi, -1.0));
      for (std::int64_t kw = lo; kw <= hi; ++kw) push(kw);
    }
    if (idx.empty()) return;
  }

  scan_recurse(sc, d - 1, 0, 0.0, rsq_prune, fn);
}

}  // namespace voxellate::detail
