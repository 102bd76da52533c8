#include "voxellate/geometry.hpp"

#include <cmath>

namespace voxellate {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_same_dim(const Point& a, const Point& b) {
  require(a.size() == b.size(), "points have mismatched dimensions");
}

}  // namespace

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "non-periodic";
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Voronoi: return "voronoi";
    case Kind::JohnsonMehl: return "johnson-mehl";
    case Kind::Laguerre: return "laguerre";
  }
  return "?";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "non-periodic" || s == "nonperiodic") return Boundary::NonPeriodic;
  throw std::invalid_argument("unknown boundary mode: " + s);
}

Kind kind_from_string(const std::string& s) {
  if (s == "voronoi") return Kind::Voronoi;
  if (s == "johnson-mehl" || s == "johnsonmehl" || s == "jm") return Kind::JohnsonMehl;
  if (s == "laguerre") return Kind::Laguerre;
  throw std::invalid_argument("unknown tessellation kind: " + s);
}

Domain::Domain(std::vector<double> lengths_, Boundary boundary_)
    : lengths(std::move(lengths_)), boundary(boundary_) {
  require(!lengths.empty(), "domain must have at least one axis");
  require(dim() <= kMaxDim, "domain dimension exceeds supported maximum (16)");
  inv_lengths.reserve(lengths.size());
  for (double L : lengths) {
    require(std::isfinite(L) && L > 0.0, "domain lengths must be positive");
    inv_lengths.push_back(1.0 / L);
  }
}

double Domain::volume() const {
  double v = 1.0;
  for (double L : lengths) v *= L;
  return v;
}

VoxelGrid::VoxelGrid(std::vector<std::int64_t> counts_, Domain domain_)
    : counts(std::move(counts_)), domain(std::move(domain_)) {
  require(static_cast<int>(counts.size()) == domain.dim(),
          "grid counts must match domain dimension");
  for (std::int64_t n : counts) require(n >= 1, "voxel counts must be positive");
  spacing.resize(counts.size());
  for (int i = 0; i < dim(); ++i)
    spacing[i] = domain.lengths[i] / static_cast<double>(counts[i]);
}

std::int64_t VoxelGrid::voxel_count() const {
  std::int64_t n = 1;
  for (std::int64_t c : counts) n *= c;
  return n;
}

double euclidean_distance_sq(const Point& a, const Point& b) {
  require_same_dim(a, b);
  return euclidean_distance_sq(a.data(), b.data(), static_cast<int>(a.size()));
}

double l_periodic_distance_sq(const Point& a, const Point& b, const Domain& domain) {
  require_same_dim(a, b);
  require(static_cast<int>(a.size()) == domain.dim(),
          "points have different dimension than the domain");
  return l_periodic_distance_sq(a.data(), b.data(), static_cast<int>(a.size()),
                                domain.lengths.data(), domain.inv_lengths.data());
}

double distance_sq(const Point& a, const Point& b, const Domain& domain) {
  if (domain.periodic()) return l_periodic_distance_sq(a, b, domain);
  require_same_dim(a, b);
  return euclidean_distance_sq(a.data(), b.data(), static_cast<int>(a.size()));
}

double proximity(Kind kind, const Point& a, const Point& site_pos, double growth,
                 double ts, const Domain& domain) {
  if (kind != Kind::Voronoi)
    require(growth > 0.0, "growth rate G must be positive for timed tessellations");
  return proximity_from_dsq(kind, distance_sq(a, site_pos, domain), growth, ts);
}

}  // namespace voxellate
