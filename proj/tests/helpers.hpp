#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "voxellate/geometry.hpp"
#include "voxellate/sites.hpp"

namespace testutil {

using namespace voxellate;

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

inline double log_uniform(std::mt19937_64& eng, double lo, double hi) {
  return std::exp(uniform(eng, std::log(lo), std::log(hi)));
}

inline Domain random_domain(std::mt19937_64& eng, int d, Boundary boundary) {
  std::vector<double> lengths(d);
  for (double& L : lengths) L = uniform(eng, 0.5, 2.0);
  return Domain(std::move(lengths), boundary);
}

inline Point random_point_in(const Domain& domain, std::mt19937_64& eng) {
  Point p(domain.dim());
  for (int i = 0; i < domain.dim(); ++i) p[i] = uniform(eng, 0.0, domain.lengths[i]);
  return p;
}

// Independent oracle for the periodic distance: minimum plain Euclidean
// distance over the 3^d shifted copies of b.  Valid for points inside the
// cell (shifts of +/- one period suffice there).
inline double shift_min_distance_sq(const Point& a, const Point& b, const Domain& domain) {
  const int d = domain.dim();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> shift(d, -1);
  while (true) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = b[i] + shift[i] * domain.lengths[i] - a[i];
      s += diff * diff;
    }
    best = std::min(best, s);
    int axis = 0;
    while (axis < d && ++shift[axis] > 1) shift[axis++] = -1;
    if (axis == d) break;
  }
  return best;
}

// Winning site index by direct evaluation with the library's tie-break
// (lowest index wins exact ties).
inline std::int64_t argmin_site(const Point& x, const SiteSet& sites, const Domain& domain) {
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_site = -1;
  for (std::int64_t s = 0; s < sites.count(); ++s) {
    Point p(sites.pos(s), sites.pos(s) + sites.dim);
    const double prox = proximity(sites.kind, x, p, sites.timed() ? sites.growth : 1.0,
                                  sites.timed() ? sites.times[s] : 0.0, domain);
    if (prox < best) {
      best = prox;
      best_site = s;
    }
  }
  return best_site;
}

}  // namespace testutil
