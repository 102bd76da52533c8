#include "voxellate/sites.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace voxellate {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Uniform double in [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Minimum over x in [0, L] (non-periodic) or over the L-circle (periodic) of
// the one-axis difference dist(x, a)^2 - dist(x, b)^2.  Summed over axes this
// gives the exact minimum of d^2(x, x_s) - d^2(x, x_s') over the domain.
double axis_min_sq_diff(double a, double b, double length, bool periodic) {
  if (periodic) {
    const double half = 0.5 * length;
    const double w = wrap_delta((b - a) + half, length);
    return w * w - half * half;
  }
  const double delta = b - a;
  const double at0 = delta * (-a - b);
  const double atL = delta * (2.0 * length - a - b);
  return at0 < atL ? at0 : atL;
}

}  // namespace

void SiteSet::validate(const Domain& domain) const {
  require(dim == domain.dim(), "site dimension does not match the domain");
  require(count() >= 1, "site set must contain at least one site");
  require(static_cast<std::int64_t>(positions.size()) == count() * dim,
          "site position array has inconsistent size");
  if (timed()) {
    require(static_cast<std::int64_t>(times.size()) == count(),
            "timed site set must carry one birth time per site");
    require(std::isfinite(growth) && growth > 0.0,
            "growth rate G must be positive for timed tessellations");
  }
  for (std::int64_t s = 0; s < count(); ++s) {
    const double* p = pos(s);
    for (int i = 0; i < dim; ++i) {
      require(std::isfinite(p[i]) && p[i] > 0.0 && p[i] < domain.lengths[i],
              "site positions must lie strictly inside the domain");
    }
  }
}

SiteSet generate_uniform_sites(const Domain& domain, std::int64_t n_sites, Kind kind,
                               double growth, double time_horizon, std::uint64_t seed) {
  require(n_sites >= 1, "number of sites must be at least 1");
  if (kind != Kind::Voronoi) {
    require(growth > 0.0, "growth rate G must be positive for timed tessellations");
    require(time_horizon > 0.0, "time horizon T must be positive");
  }
  SiteSet out;
  out.kind = kind;
  out.dim = domain.dim();
  out.growth = kind == Kind::Voronoi ? 0.0 : growth;
  out.positions.resize(static_cast<std::size_t>(n_sites) * out.dim);
  if (kind != Kind::Voronoi) out.times.resize(static_cast<std::size_t>(n_sites));

  std::mt19937_64 eng(seed);
  for (std::int64_t s = 0; s < n_sites; ++s) {
    for (int i = 0; i < out.dim; ++i) {
      double u = uniform01(eng);
      while (u == 0.0) u = uniform01(eng);  // keep positions strictly interior
      out.positions[s * out.dim + i] = u * domain.lengths[i];
    }
    if (kind != Kind::Voronoi) out.times[s] = uniform01(eng) * time_horizon;
  }
  return out;
}

SiteSet spheres_to_timed_sites(const LaguerreSpheres& spheres, double growth) {
  require(growth > 0.0, "growth rate G must be positive");
  require(spheres.count() >= 1, "sphere set must contain at least one sphere");
  require(static_cast<std::int64_t>(spheres.radii.size()) == spheres.count(),
          "sphere set must carry one radius per center");
  SiteSet out;
  out.kind = Kind::Laguerre;
  out.dim = spheres.dim;
  out.growth = growth;
  out.positions = spheres.positions;
  out.times.resize(spheres.radii.size());
  for (std::size_t s = 0; s < spheres.radii.size(); ++s) {
    const double r = spheres.radii[s];
    require(r >= 0.0, "sphere radii must be nonnegative");
    out.times[s] = -(r * r) / growth;
  }
  return out;
}

SiteSet shift_time_reference(const SiteSet& sites, double t_ref) {
  require(sites.timed(), "time reference shift applies to timed tessellations only");
  SiteSet out = sites;
  for (double& t : out.times) t -= t_ref;
  return out;
}

PruneResult prune_ineffective_sites(const SiteSet& sites, const Domain& domain) {
  require(sites.timed(), "pruning applies to timed tessellations only");
  sites.validate(domain);
  const std::int64_t n = sites.count();
  const int d = sites.dim;
  const double growth = sites.growth;
  const bool periodic = domain.periodic();
  const double* lengths = domain.lengths.data();
  const double* inv_lengths = domain.inv_lengths.data();

  std::vector<char> dropped(static_cast<std::size_t>(n), 0);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t s = 0; s < n; ++s) {
    const double* xs = sites.pos(s);
    const double ts = sites.times[s];
    for (std::int64_t o = 0; o < n; ++o) {
      if (o == s) continue;
      const double* xo = sites.pos(o);
      if (sites.kind == Kind::JohnsonMehl) {
        // Reached at its own position no later than its birth time: the other
        // crystal is then closer-or-equal everywhere.
        const double dsq = periodic
                               ? l_periodic_distance_sq(xs, xo, d, lengths, inv_lengths)
                               : euclidean_distance_sq(xs, xo, d);
        const double reach = std::sqrt(dsq) / growth + sites.times[o];
        if (reach < ts || (reach == ts && o < s)) {
          dropped[s] = 1;
          break;
        }
      } else {
        // Laguerre: exact domination test.  margin is the minimum over the
        // domain of (ranking of s) - (ranking of o), scaled by G.
        double margin = growth * (ts - sites.times[o]);
        for (int i = 0; i < d; ++i)
          margin += axis_min_sq_diff(xs[i], xo[i], lengths[i], periodic);
        if (margin > 0.0 || (margin == 0.0 && o < s)) {
          dropped[s] = 1;
          break;
        }
      }
    }
  }

  PruneResult out;
  out.sites.kind = sites.kind;
  out.sites.dim = d;
  out.sites.growth = growth;
  for (std::int64_t s = 0; s < n; ++s) {
    if (dropped[s]) {
      out.removed.push_back(s);
      continue;
    }
    out.kept.push_back(s);
    out.sites.positions.insert(out.sites.positions.end(), sites.pos(s), sites.pos(s) + d);
    out.sites.times.push_back(sites.times[s]);
  }
  return out;
}

namespace {

double parse_double(const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("site file: malformed ") + what + " '" + tok + "'");
  }
}

}  // namespace

SiteFile read_site_file(std::istream& in) {
  std::string kind_tok;
  long long d_ll = 0, n_ll = 0;
  std::string g_tok;
  if (!(in >> kind_tok >> d_ll >> n_ll >> g_tok))
    throw std::runtime_error("site file: missing or malformed header (kind d N G)");
  if (d_ll < 1 || d_ll > kMaxDim)
    throw std::runtime_error("site file: dimension out of supported range");
  if (n_ll < 1) throw std::runtime_error("site file: site count must be at least 1");
  const int d = static_cast<int>(d_ll);
  const std::int64_t n = n_ll;
  const double growth = parse_double(g_tok, "growth rate");

  SiteFile out;
  const bool spheres = kind_tok == "spheres";
  out.is_spheres = spheres;
  const Kind kind = spheres ? Kind::Laguerre : kind_from_string(kind_tok);
  const bool has_trailing = spheres || kind != Kind::Voronoi;

  auto read_value = [&in](const char* what) {
    std::string tok;
    if (!(in >> tok))
      throw std::runtime_error(std::string("site file: unexpected end of data reading ") + what);
    return parse_double(tok, what);
  };

  std::vector<double> positions(static_cast<std::size_t>(n) * d);
  std::vector<double> trailing(has_trailing ? static_cast<std::size_t>(n) : 0);
  for (std::int64_t s = 0; s < n; ++s) {
    for (int i = 0; i < d; ++i) positions[s * d + i] = read_value("coordinate");
    if (has_trailing) trailing[s] = read_value(spheres ? "radius" : "birth time");
  }

  if (spheres) {
    out.spheres.dim = d;
    out.spheres.positions = std::move(positions);
    out.spheres.radii = std::move(trailing);
    for (double r : out.spheres.radii)
      if (!(r >= 0.0)) throw std::runtime_error("site file: sphere radii must be nonnegative");
  } else {
    out.sites.kind = kind;
    out.sites.dim = d;
    out.sites.positions = std::move(positions);
    out.sites.times = std::move(trailing);
    out.sites.growth = kind == Kind::Voronoi ? 0.0 : growth;
    if (kind != Kind::Voronoi && !(growth > 0.0))
      throw std::runtime_error("site file: growth rate G must be positive for timed kinds");
  }
  return out;
}

SiteFile read_site_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open site file: " + path);
  return read_site_file(in);
}

void write_site_file(std::ostream& out, const SiteSet& sites) {
  out << std::setprecision(17);
  out << to_string(sites.kind) << ' ' << sites.dim << ' ' << sites.count() << ' '
      << (sites.timed() ? sites.growth : 0.0) << '\n';
  for (std::int64_t s = 0; s < sites.count(); ++s) {
    const double* p = sites.pos(s);
    for (int i = 0; i < sites.dim; ++i) out << (i ? " " : "") << p[i];
    if (sites.timed()) out << ' ' << sites.times[s];
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing site data");
}

void write_site_file(const std::string& path, const SiteSet& sites) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open site file for writing: " + path);
  write_site_file(out, sites);
}

void write_sphere_file(std::ostream& out, const LaguerreSpheres& spheres) {
  out << std::setprecision(17);
  out << "spheres " << spheres.dim << ' ' << spheres.count() << " 0\n";
  for (std::int64_t s = 0; s < spheres.count(); ++s) {
    const double* p = spheres.positions.data() + s * spheres.dim;
    for (int i = 0; i < spheres.dim; ++i) out << (i ? " " : "") << p[i];
    out << ' ' << spheres.radii[s] << '\n';
  }
  if (!out) throw std::runtime_error("failed writing sphere data");
}

}  // namespace voxellate
