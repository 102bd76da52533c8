#include "voxellate/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace voxellate {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double unit_ball_volume(int d) {
  require(d >= 1, "dimension must be at least 1");
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace

double ball_volume(double r, int d) {
  require(r >= 0.0, "ball radius must be nonnegative");
  return unit_ball_volume(d) * std::pow(r, d);
}

double radius_from_volume(double v, int d) {
  require(v >= 0.0, "ball volume must be nonnegative");
  return std::pow(v / unit_ball_volume(d), 1.0 / d);
}

double optimal_v0(std::int64_t n_sites, double volume) {
  require(n_sites >= 2, "optimal ball volume needs at least 2 sites");
  require(volume > 0.0, "domain volume must be positive");
  const double ns = static_cast<double>(n_sites);
  // 1 - (1/N)^(1/(N-1)) via expm1 for accuracy at large N.
  return volume * (-std::expm1(-std::log(ns) / (ns - 1.0)));
}

double voronoi_cost(double v0, const CostModel& model) {
  require(model.volume > 0.0 && model.n_sites >= 1 && model.n_voxels >= 1,
          "cost model fields must be positive");
  require(v0 > 0.0 && v0 <= model.volume, "ball volume must lie in (0, V]");
  const double frac = v0 / model.volume;
  const double ns = static_cast<double>(model.n_sites);
  const double nv = static_cast<double>(model.n_voxels);
  return ns * nv * (frac + std::pow(1.0 - frac, ns));
}

double asymptotic_voronoi_cost(std::int64_t n_voxels, std::int64_t n_sites) {
  require(n_sites >= 2, "asymptotic cost needs at least 2 sites");
  return static_cast<double>(n_voxels) * (std::log(static_cast<double>(n_sites)) + 1.0);
}

double growth_cost(double t0, const SiteSet& sites, const VoxelGrid& grid) {
  require(sites.timed(), "growth cost applies to timed tessellations only");
  const double V = grid.domain.volume();
  const double nv = static_cast<double>(grid.voxel_count());
  const double ns = static_cast<double>(sites.count());
  const int d = sites.dim;
  const double unit = unit_ball_volume(d);

  double sum_frac = 0.0;
  double prod_miss = 1.0;
  for (std::int64_t s = 0; s < sites.count(); ++s) {
    const double dt = t0 - sites.times[s];
    double r = 0.0;
    if (dt > 0.0)
      r = sites.kind == Kind::JohnsonMehl ? sites.growth * dt : std::sqrt(sites.growth * dt);
    const double v = std::min(V, unit * std::pow(r, d));
    sum_frac += v / V;
    prod_miss *= 1.0 - v / V;
  }
  return nv * sum_frac + ns * nv * prod_miss;
}

T0Bracket t0_bracket(const SiteSet& sites, const Domain& domain) {
  require(sites.timed(), "t0 bracket applies to timed tessellations only");
  require(sites.count() >= 1, "site set must contain at least one site");
  double sum_lsq = 0.0;
  for (double L : domain.lengths) sum_lsq += L * L;
  const double t_min = *std::min_element(sites.times.begin(), sites.times.end());

  // Width = time for one crystal to reach every point of the domain; the
  // farthest point is half the diagonal away under periodic wrap, a full
  // diagonal otherwise.
  double width;
  if (sites.kind == Kind::JohnsonMehl) {
    const double reach = std::sqrt(sum_lsq);
    width = domain.periodic() ? reach / (2.0 * sites.growth) : reach / sites.growth;
  } else {
    width = domain.periodic() ? sum_lsq / (4.0 * sites.growth) : sum_lsq / sites.growth;
  }
  return {t_min, t_min + width};
}

double search_optimal_t0(const SiteSet& sites, const VoxelGrid& grid) {
  const T0Bracket bracket = t0_bracket(sites, grid.domain);
  if (!(bracket.hi > bracket.lo)) return bracket.lo;

  auto cost = [&](double t0) { return growth_cost(t0, sites, grid); };

  // Coarse scan to find the basin: the objective is the sum of a
  // nondecreasing and a nonincreasing term, which is not guaranteed unimodal.
  constexpr int kScanPoints = 257;
  double best_t = bracket.lo;
  double best_c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double t = bracket.lo + (bracket.hi - bracket.lo) * i / (kScanPoints - 1);
    const double c = cost(t);
    if (c < best_c) {
      best_c = c;
      best_t = t;
    }
  }

  // Golden-section refinement inside the bracketing neighbors of the scan
  // minimum.
  const double step = (bracket.hi - bracket.lo) / (kScanPoints - 1);
  double a = std::max(bracket.lo, best_t - step);
  double b = std::min(bracket.hi, best_t + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = cost(x1);
  double f2 = cost(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = cost(x2);
    }
  }
  const double refined = f1 <= f2 ? x1 : x2;
  const double refined_c = std::min(f1, f2);
  return refined_c <= best_c ? refined : best_t;
}

}  // namespace voxellate
