#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace voxellate {

enum class Boundary { Periodic, NonPeriodic };
enum class Kind { Voronoi, JohnsonMehl, Laguerre };

// Hot loops use fixed-size stack buffers; dimensions above this are rejected
// at construction time with a usage error.
inline constexpr int kMaxDim = 16;

using Point = std::vector<double>;

std::string to_string(Boundary b);
std::string to_string(Kind k);
Boundary boundary_from_string(const std::string& s);
Kind kind_from_string(const std::string& s);

// Axis-aligned rectangular box [0,L_1) x ... x [0,L_d), optionally with
// periodic (wrap-around) boundaries.
struct Domain {
  std::vector<double> lengths;
  std::vector<double> inv_lengths;  // 1/L_i, computed once at construction
  Boundary boundary = Boundary::Periodic;

  Domain() = default;
  Domain(std::vector<double> lengths_, Boundary boundary_);

  int dim() const { return static_cast<int>(lengths.size()); }
  double volume() const;
  bool periodic() const { return boundary == Boundary::Periodic; }
};

// Regular grid of n_1 x ... x n_d voxels over a Domain.  Voxel multi-indices
// are 0-based; the center of voxel k is at (k_i + 1/2) * L_i / n_i.  Linear
// order is row-major with axis 0 fastest:
//   linear = k_0 + n_0 * (k_1 + n_1 * (k_2 + ...)).
struct VoxelGrid {
  std::vector<std::int64_t> counts;
  Domain domain;
  std::vector<double> spacing;  // L_i / n_i, computed once at construction

  VoxelGrid() = default;
  VoxelGrid(std::vector<std::int64_t> counts_, Domain domain_);

  int dim() const { return static_cast<int>(counts.size()); }
  std::int64_t voxel_count() const;

  // Coordinate of a voxel center along one axis.  Every distance computation
  // in the library goes through this exact expression so that independent
  // code paths agree bit-for-bit.
  double center_coord(int axis, std::int64_t k) const {
    return (static_cast<double>(k) + 0.5) * spacing[axis];
  }

  void center(const std::int64_t* idx, double* out) const {
    for (int i = 0; i < dim(); ++i) out[i] = center_coord(i, idx[i]);
  }

  std::int64_t linear_index(const std::int64_t* idx) const {
    std::int64_t lin = 0;
    for (int i = dim() - 1; i >= 0; --i) lin = lin * counts[i] + idx[i];
    return lin;
  }

  void decompose(std::int64_t linear, std::int64_t* idx) const {
    for (int i = 0; i < dim(); ++i) {
      idx[i] = linear % counts[i];
      linear /= counts[i];
    }
  }
};

// Nearest-integer function N(x) = floor(x + 1/2); half-integer ties resolve
// upward.  Shared by every periodic-wrap computation in the library.
inline double nearest_integer(double x) { return std::floor(x + 0.5); }

// Signed representative of u modulo L closest to zero (|result| <= L/2).
// All call sites multiply by the rounded reciprocal rather than dividing so
// that hot loops (which hoist 1/L) and convenience paths agree bit-for-bit.
inline double wrap_delta(double u, double length, double inv_length) {
  return u - nearest_integer(u * inv_length) * length;
}

inline double wrap_delta(double u, double length) {
  return wrap_delta(u, length, 1.0 / length);
}

// Squared distances.  Both fold their per-axis terms from the last axis down
// to axis 0; the ball-scanning engine accumulates its partial sums in the
// same order, which keeps fast and brute-force labels bit-identical even for
// voxels near cell boundaries.
double euclidean_distance_sq(const Point& a, const Point& b);
double l_periodic_distance_sq(const Point& a, const Point& b, const Domain& domain);

// Squared distance respecting the domain's boundary mode.
double distance_sq(const Point& a, const Point& b, const Domain& domain);

// Raw-pointer kernels used by the engines (a = query point, b = site).
inline double euclidean_distance_sq(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = d - 1; i >= 0; --i) {
    const double diff = b[i] - a[i];
    s += diff * diff;
  }
  return s;
}

inline double l_periodic_distance_sq(const double* a, const double* b, int d,
                                     const double* lengths, const double* inv_lengths) {
  double s = 0.0;
  for (int i = d - 1; i >= 0; --i) {
    const double w = wrap_delta(b[i] - a[i], lengths[i], inv_lengths[i]);
    s += w * w;
  }
  return s;
}

// Ranking value whose per-point argmin over sites defines cell membership:
// Voronoi -> squared distance; Johnson-Mehl -> distance/G + t_s;
// Laguerre -> squared distance/G + t_s.  Smaller is closer.
inline double proximity_from_dsq(Kind kind, double dsq, double growth, double ts) {
  switch (kind) {
    case Kind::Voronoi: return dsq;
    case Kind::JohnsonMehl: return std::sqrt(dsq) / growth + ts;
    case Kind::Laguerre: return dsq / growth + ts;
  }
  return dsq;  // unreachable
}

double proximity(Kind kind, const Point& a, const Point& site_pos, double growth,
                 double ts, const Domain& domain);

}  // namespace voxellate
