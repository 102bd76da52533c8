#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "voxellate/cost.hpp"

using namespace voxellate;
using namespace testutil;

TEST_CASE("ball volume and inverse radius") {
  CHECK(ball_volume(1.0, 2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ball_volume(1.0, 3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  CHECK(ball_volume(2.0, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(ball_volume(0.0, 3) == 0.0);
  CHECK_THROWS_AS(ball_volume(-1.0, 3), std::invalid_argument);

  std::mt19937_64 eng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(eng() % 6);
    const double r = log_uniform(eng, 1e-3, 1e3);
    CHECK(radius_from_volume(ball_volume(r, d), d) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("optimal common ball volume") {
  CHECK(optimal_v0(2, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(optimal_v0(1000, 1.0) == doctest::Approx(0.0068908186).epsilon(1e-7));
  CHECK(radius_from_volume(optimal_v0(1000, 1.0), 3) == doctest::Approx(0.118).epsilon(0.05));
  // Large-count limit: v0/V ~ ln(N)/N.
  CHECK(optimal_v0(1000000, 1.0) ==
        doctest::Approx(std::log(1e6) / 1e6).epsilon(0.05));
  CHECK_THROWS_AS(optimal_v0(1, 1.0), std::invalid_argument);

  // Argmin property: no grid point beats the closed form by more than 0.1%.
  std::mt19937_64 eng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::int64_t ns = 2 + static_cast<std::int64_t>(log_uniform(eng, 1.0, 1e5));
    const double volume = log_uniform(eng, 0.1, 10.0);
    const CostModel model{1000000, ns, volume};
    const double at_optimum = voronoi_cost(optimal_v0(ns, volume), model);
    double scan_min = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 10000; ++i) {
      const double v = i == 10000 ? volume : volume * (i / 10000.0);
      scan_min = std::min(scan_min, voronoi_cost(v, model));
    }
    CHECK(scan_min >= at_optimum * 0.999);
  }
}

TEST_CASE("two-step cost formula limits") {
  const CostModel model{8000, 500, 2.0};
  const double nsnv = 500.0 * 8000.0;
  CHECK(voronoi_cost(2.0, model) == doctest::Approx(nsnv).epsilon(1e-12));
  // v0 -> 0: step 2 degenerates to brute force.
  CHECK(voronoi_cost(2e-13, model) == doctest::Approx(nsnv).epsilon(1e-9));
  // Interior value against a direct evaluation of the formula.
  const double frac = 0.01;
  CHECK(voronoi_cost(frac * 2.0, model) ==
        doctest::Approx(nsnv * (frac + std::pow(1.0 - frac, 500))).epsilon(1e-12));
  CHECK_THROWS_AS(voronoi_cost(0.0, model), std::invalid_argument);
  CHECK_THROWS_AS(voronoi_cost(2.5, model), std::invalid_argument);
}

TEST_CASE("asymptotic cost approaches the exact optimum from above") {
  CHECK(asymptotic_voronoi_cost(1000, 10) ==
        doctest::Approx(1000.0 * (std::log(10.0) + 1.0)).epsilon(1e-14));

  double previous_gap = std::numeric_limits<double>::infinity();
  for (std::int64_t ns : {1000, 10000, 100000}) {
    const CostModel model{1 << 24, ns, 1.0};
    const double exact = voronoi_cost(optimal_v0(ns, 1.0), model);
    const double asym = asymptotic_voronoi_cost(model.n_voxels, ns);
    const double gap = std::abs(asym / exact - 1.0);
    CHECK(gap < previous_gap);
    previous_gap = gap;
    if (ns >= 10000) CHECK(gap < 0.05);
  }
}

namespace {

// Test-local restatement of the growth cost as its two phase terms.
std::pair<double, double> growth_cost_terms(double t0, const SiteSet& sites,
                                            const VoxelGrid& grid) {
  const double V = grid.domain.volume();
  double sum = 0.0, prod = 1.0;
  for (std::int64_t s = 0; s < sites.count(); ++s) {
    const double dt = std::max(0.0, t0 - sites.times[s]);
    const double r =
        sites.kind == Kind::JohnsonMehl ? sites.growth * dt : std::sqrt(sites.growth * dt);
    const double v = std::min(V, ball_volume(r, sites.dim));
    sum += v / V;
    prod *= 1.0 - v / V;
  }
  const double nv = static_cast<double>(grid.voxel_count());
  return {nv * sum, static_cast<double>(sites.count()) * nv * prod};
}

}  // namespace

TEST_CASE("growth cost matches its formula and phase monotonicity") {
  std::mt19937_64 eng(9);
  for (int trial = 0; trial < 8; ++trial) {
    const Kind kind = trial % 2 ? Kind::JohnsonMehl : Kind::Laguerre;
    Domain box = random_domain(eng, 3, Boundary::Periodic);
    const VoxelGrid grid({20, 20, 20}, box);
    SiteSet sites = generate_uniform_sites(box, 200, kind, log_uniform(eng, 0.1, 10.0), 1.0,
                                           eng());
    const T0Bracket bracket = t0_bracket(sites, box);

    const double nsnv =
        static_cast<double>(sites.count()) * static_cast<double>(grid.voxel_count());
    CHECK(growth_cost(bracket.lo, sites, grid) == doctest::Approx(nsnv).epsilon(1e-12));
    CHECK(growth_cost(bracket.hi * 4.0, sites, grid) == doctest::Approx(nsnv).epsilon(1e-9));

    double prev_step1 = -1.0, prev_step2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 32; ++i) {
      const double t0 = bracket.lo + (bracket.hi - bracket.lo) * i / 32.0;
      const auto [step1, step2] = growth_cost_terms(t0, sites, grid);
      CHECK(growth_cost(t0, sites, grid) ==
            doctest::Approx(step1 + step2).epsilon(1e-12));
      CHECK(step1 >= prev_step1);
      CHECK(step2 <= prev_step2 * (1 + 1e-12));
      prev_step1 = step1;
      prev_step2 = step2;
    }
  }
}

TEST_CASE("Voronoi-degenerate growth cost reduces to the common-ball formula") {
  Domain box({1.0, 1.0, 1.0}, Boundary::Periodic);
  const VoxelGrid grid({32, 32, 32}, box);
  SiteSet sites = generate_uniform_sites(box, 300, Kind::JohnsonMehl, 2.0, 1.0, 17);
  std::fill(sites.times.begin(), sites.times.end(), 0.5);
  const CostModel model{grid.voxel_count(), sites.count(), box.volume()};
  for (double dt : {0.01, 0.05, 0.1, 0.2}) {
    const double v0 = std::min(box.volume(), ball_volume(sites.growth * dt, 3));
    CHECK(growth_cost(0.5 + dt, sites, grid) ==
          doctest::Approx(voronoi_cost(v0, model)).epsilon(1e-12));
  }
}

TEST_CASE("t0 search lands within 1% of a dense bracket scan") {
  std::mt19937_64 eng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Kind kind = trial % 2 ? Kind::JohnsonMehl : Kind::Laguerre;
    const Boundary boundary = (trial / 2) % 2 ? Boundary::Periodic : Boundary::NonPeriodic;
    Domain box = random_domain(eng, 3, boundary);
    const VoxelGrid grid({24, 24, 24}, box);
    SiteSet sites =
        generate_uniform_sites(box, 50 + static_cast<std::int64_t>(eng() % 2000), kind,
                               log_uniform(eng, 0.05, 20.0), log_uniform(eng, 0.2, 5.0), eng());

    const T0Bracket bracket = t0_bracket(sites, box);
    const double found = search_optimal_t0(sites, grid);
    CHECK(found >= bracket.lo);
    CHECK(found <= bracket.hi);

    double scan_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 513; ++i)
      scan_min = std::min(
          scan_min,
          growth_cost(bracket.lo + (bracket.hi - bracket.lo) * i / 512.0, sites, grid));
    CHECK(growth_cost(found, sites, grid) <= 1.01 * scan_min);
  }
}
