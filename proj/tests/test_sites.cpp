#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "voxellate/sites.hpp"
#include "voxellate/tessellate.hpp"

using namespace voxellate;
using namespace testutil;

TEST_CASE("uniform site generation is deterministic and in range") {
  Domain square({1.0, 1.0}, Boundary::Periodic);
  const SiteSet a = generate_uniform_sites(square, 4, Kind::Voronoi, 0.0, 1.0, 7);
  const SiteSet b = generate_uniform_sites(square, 4, Kind::Voronoi, 0.0, 1.0, 7);
  CHECK(a.positions == b.positions);
  const SiteSet c = generate_uniform_sites(square, 4, Kind::Voronoi, 0.0, 1.0, 8);
  CHECK(a.positions != c.positions);

  CHECK_THROWS_AS(generate_uniform_sites(square, 0, Kind::Voronoi, 0.0, 1.0, 1),
                  std::invalid_argument);

  Domain box({2.0, 0.5, 1.0}, Boundary::NonPeriodic);
  const SiteSet jm = generate_uniform_sites(box, 10000, Kind::JohnsonMehl, 1.0, 1.0, 3);
  jm.validate(box);
  for (double t : jm.times) {
    CHECK(t >= 0.0);
    CHECK(t < 1.0);
  }
}

TEST_CASE("uniform site generation has uniform per-axis means") {
  Domain cube({1.0, 1.0, 1.0}, Boundary::Periodic);
  const std::int64_t n = 100000;
  const SiteSet sites = generate_uniform_sites(cube, n, Kind::Voronoi, 0.0, 1.0, 99);
  const double sigma = 1.0 / std::sqrt(12.0 * n);
  for (int axis = 0; axis < 3; ++axis) {
    double mean = 0.0;
    for (std::int64_t s = 0; s < n; ++s) mean += sites.pos(s)[axis];
    mean /= n;
    CHECK(std::abs(mean - 0.5) < 5.0 * sigma);
  }
}

TEST_CASE("sphere radii convert to birth times preserving the power ranking") {
  LaguerreSpheres zero{1, {0.5}, {0.0}};
  CHECK(spheres_to_timed_sites(zero, 1.0).times[0] == 0.0);
  LaguerreSpheres one{1, {0.5}, {2.0}};
  CHECK(spheres_to_timed_sites(one, 4.0).times[0] == -1.0);

  std::mt19937_64 eng(21);
  Domain box({1.5, 1.0}, Boundary::NonPeriodic);
  LaguerreSpheres spheres;
  spheres.dim = 2;
  for (int s = 0; s < 40; ++s) {
    Point p = random_point_in(box, eng);
    spheres.positions.insert(spheres.positions.end(), p.begin(), p.end());
    spheres.radii.push_back(uniform(eng, 0.0, 0.5));
  }
  const double growth = 3.0;
  const SiteSet sites = spheres_to_timed_sites(spheres, growth);

  for (int q = 0; q < 100; ++q) {
    Point x = random_point_in(box, eng);
    // Power-distance winner, smallest d^2 - r^2.
    double best_power = std::numeric_limits<double>::infinity();
    int best_site = -1;
    for (int s = 0; s < 40; ++s) {
      Point p(spheres.positions.begin() + 2 * s, spheres.positions.begin() + 2 * s + 2);
      const double power = euclidean_distance_sq(x, p) - spheres.radii[s] * spheres.radii[s];
      if (power < best_power) {
        best_power = power;
        best_site = s;
      }
    }
    CHECK(argmin_site(x, sites, box) == best_site);
  }
}

TEST_CASE("sphere conversion round-trips through a shifted time reference") {
  std::mt19937_64 eng(22);
  Domain box({1.0, 1.0}, Boundary::Periodic);
  LaguerreSpheres spheres;
  spheres.dim = 2;
  for (int s = 0; s < 25; ++s) {
    Point p = random_point_in(box, eng);
    spheres.positions.insert(spheres.positions.end(), p.begin(), p.end());
    spheres.radii.push_back(uniform(eng, 0.0, 0.4));
  }
  const double growth = 2.0;
  const SiteSet sites = spheres_to_timed_sites(spheres, growth);
  const double t_ref = *std::max_element(sites.times.begin(), sites.times.end());

  // Radii recovered against the latest birth time give back the same power
  // ranking everywhere.
  LaguerreSpheres back = spheres;
  for (int s = 0; s < 25; ++s)
    back.radii[s] = std::sqrt(-growth * (sites.times[s] - t_ref));
  const SiteSet again = spheres_to_timed_sites(back, growth);
  for (int q = 0; q < 200; ++q) {
    Point x = random_point_in(box, eng);
    CHECK(argmin_site(x, sites, box) == argmin_site(x, again, box));
  }
}

TEST_CASE("time reference shifts never change the partition") {
  std::mt19937_64 eng(23);
  Domain box({1.0, 1.4}, Boundary::Periodic);
  SiteSet sites = generate_uniform_sites(box, 30, Kind::JohnsonMehl, 2.0, 1.0, 5);
  CHECK(shift_time_reference(sites, 0.0).times == sites.times);

  const double t_min = *std::min_element(sites.times.begin(), sites.times.end());
  const SiteSet shifted = shift_time_reference(sites, t_min);
  for (double t : shifted.times) CHECK(t >= 0.0);

  const VoxelGrid grid({32, 32}, box);
  CHECK(tessellate_brute(sites, grid).labels.labels ==
        tessellate_brute(shifted, grid).labels.labels);
}

TEST_CASE("pruning removes overtaken sites and keeps the earliest") {
  Domain box({1.0, 1.0}, Boundary::Periodic);
  for (Kind kind : {Kind::JohnsonMehl, Kind::Laguerre}) {
    SiteSet sites;
    sites.kind = kind;
    sites.dim = 2;
    sites.growth = 1.0;
    sites.positions = {0.5, 0.5, 0.5, 0.5};  // coincident
    sites.times = {0.1, 0.2};
    const PruneResult pruned = prune_ineffective_sites(sites, box);
    CHECK(pruned.removed == std::vector<std::int64_t>{1});
    CHECK(pruned.kept == std::vector<std::int64_t>{0});

    // Coincident with equal times: exactly one survives (the lower index).
    sites.times = {0.3, 0.3};
    const PruneResult tied = prune_ineffective_sites(sites, box);
    CHECK(tied.removed == std::vector<std::int64_t>{1});
  }
}

TEST_CASE("pruning keeps everything when all birth times are equal") {
  std::mt19937_64 eng(31);
  Domain box({1.0, 1.0, 1.0}, Boundary::NonPeriodic);
  for (Kind kind : {Kind::JohnsonMehl, Kind::Laguerre}) {
    SiteSet sites = generate_uniform_sites(box, 50, kind, 5.0, 1.0, eng());
    std::fill(sites.times.begin(), sites.times.end(), 0.25);
    CHECK(prune_ineffective_sites(sites, box).removed.empty());
  }
}

TEST_CASE("a late Laguerre site reached before birth can still own cells") {
  // Power diagrams are not metric growth: site B below is reached by A's
  // crystal before B is born, yet B owns the right part of the domain.  A
  // reached-before-birth prune would break the partition here.
  Domain strip({6.0, 1.0}, Boundary::NonPeriodic);
  SiteSet sites;
  sites.kind = Kind::Laguerre;
  sites.dim = 2;
  sites.growth = 1.0;
  sites.positions = {1.0, 0.5, 2.0, 0.5};
  sites.times = {-4.0, 0.0};
  CHECK(prune_ineffective_sites(sites, strip).removed.empty());

  const VoxelGrid grid({96, 16}, strip);
  const LabelImage labels = tessellate_brute(sites, grid).labels;
  CHECK(std::count(labels.labels.begin(), labels.labels.end(), 1u) > 0);
}

TEST_CASE("pruning preserves brute-force partitions on random instances") {
  std::mt19937_64 eng(37);
  for (int trial = 0; trial < 24; ++trial) {
    const Kind kind = trial % 2 ? Kind::JohnsonMehl : Kind::Laguerre;
    const Boundary boundary = (trial / 2) % 2 ? Boundary::Periodic : Boundary::NonPeriodic;
    Domain box = random_domain(eng, 2, boundary);
    SiteSet sites =
        generate_uniform_sites(box, 5 + static_cast<std::int64_t>(eng() % 60), kind,
                               log_uniform(eng, 0.2, 10.0), 1.0, eng());
    const PruneResult pruned = prune_ineffective_sites(sites, box);

    const VoxelGrid grid({48, 48}, box);
    const LabelImage full = tessellate_brute(sites, grid).labels;
    LabelImage reduced = tessellate_brute(pruned.sites, grid).labels;
    for (auto& label : reduced.labels)
      label = static_cast<std::uint32_t>(pruned.kept[label]);
    CHECK(full.labels == reduced.labels);
    for (std::int64_t removed : pruned.removed)
      CHECK(std::count(full.labels.begin(), full.labels.end(),
                       static_cast<std::uint32_t>(removed)) == 0);
  }
}

TEST_CASE("site files round-trip and reject malformed input") {
  std::mt19937_64 eng(41);
  Domain box({1.0, 2.0, 1.0}, Boundary::Periodic);
  const SiteSet sites = generate_uniform_sites(box, 17, Kind::JohnsonMehl, 1.5, 1.0, 2);

  std::stringstream buffer;
  write_site_file(buffer, sites);
  const SiteFile loaded = read_site_file(buffer);
  CHECK_FALSE(loaded.is_spheres);
  CHECK(loaded.sites.kind == Kind::JohnsonMehl);
  CHECK(loaded.sites.positions == sites.positions);
  CHECK(loaded.sites.times == sites.times);
  CHECK(loaded.sites.growth == sites.growth);

  std::stringstream spheres_text("spheres 2 2 0\n0.25 0.5 0.1\n0.75 0.5 0.2\n");
  const SiteFile spheres = read_site_file(spheres_text);
  CHECK(spheres.is_spheres);
  CHECK(spheres.spheres.count() == 2);
  CHECK(spheres.spheres.radii == std::vector<double>{0.1, 0.2});

  std::stringstream bad_header("nonsense 2 2 1\n");
  CHECK_THROWS_AS(read_site_file(bad_header), std::exception);
  std::stringstream truncated("voronoi 2 3 0\n0.1 0.2\n0.3 0.4\n");
  CHECK_THROWS_AS(read_site_file(truncated), std::runtime_error);
  std::stringstream bad_value("voronoi 1 1 0\nabc\n");
  CHECK_THROWS_AS(read_site_file(bad_value), std::runtime_error);
  std::stringstream bad_growth("johnson-mehl 1 1 0\n0.5 0.1\n");
  CHECK_THROWS_AS(read_site_file(bad_growth), std::runtime_error);
}

TEST_CASE("site validation rejects boundary and exterior positions") {
  Domain box({1.0, 1.0}, Boundary::Periodic);
  SiteSet sites;
  sites.kind = Kind::Voronoi;
  sites.dim = 2;
  sites.positions = {0.0, 0.5};  // on the boundary
  CHECK_THROWS_AS(sites.validate(box), std::invalid_argument);
  sites.positions = {0.5, 1.5};  // outside
  CHECK_THROWS_AS(sites.validate(box), std::invalid_argument);
  sites.positions = {0.5, 0.5};
  CHECK_NOTHROW(sites.validate(box));
}
