#include "voxellate/image_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "image files are little-endian; big-endian hosts are unsupported");

namespace voxellate {

namespace {

using nlohmann::json;

json sidecar_json(const VoxelGrid& grid, const ImageMeta& meta, const char* type,
                  std::size_t payload_bytes) {
  json j;
  j["format_version"] = meta.format_version;
  j["type"] = type;
  j["d"] = grid.dim();
  j["dims"] = grid.counts;
  j["lengths"] = grid.domain.lengths;
  j["boundary"] = to_string(grid.domain.boundary);
  j["kind"] = to_string(meta.kind);
  j["n_sites"] = meta.n_sites;
  j["seed"] = meta.seed;
  j["payload_bytes"] = payload_bytes;
  return j;
}

void write_payload(const std::string& path, const void* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open image file for writing: " + path);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw std::runtime_error("failed writing image payload: " + path);
}

void write_sidecar(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open sidecar for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing sidecar: " + path);
}

struct ReadHeader {
  VoxelGrid grid;
  ImageMeta meta;
  std::size_t payload_bytes = 0;
};

ReadHeader read_sidecar(const std::string& path, const char* expected_type) {
  std::ifstream in(path + ".json");
  if (!in) throw std::runtime_error("cannot open image sidecar: " + path + ".json");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed image sidecar " + path + ".json: " + e.what());
  }
  ReadHeader out;
  try {
    out.meta.format_version = j.at("format_version").get<int>();
    out.meta.type = j.at("type").get<std::string>();
    out.meta.kind = kind_from_string(j.at("kind").get<std::string>());
    out.meta.n_sites = j.at("n_sites").get<std::int64_t>();
    out.meta.seed = j.value("seed", std::int64_t{-1});
    auto dims = j.at("dims").get<std::vector<std::int64_t>>();
    auto lengths = j.at("lengths").get<std::vector<double>>();
    const Boundary boundary = boundary_from_string(j.at("boundary").get<std::string>());
    out.grid = VoxelGrid(std::move(dims), Domain(std::move(lengths), boundary));
    out.payload_bytes = j.at("payload_bytes").get<std::size_t>();
  } catch (const json::exception& e) {
    throw std::runtime_error("image sidecar " + path + ".json missing fields: " + e.what());
  }
  if (out.meta.format_version != 1)
    throw std::runtime_error("unsupported image format version in " + path + ".json");
  if (out.meta.type != expected_type)
    throw std::runtime_error("image " + path + " has type '" + out.meta.type + "', expected '" +
                             expected_type + "'");
  return out;
}

void read_payload(const std::string& path, void* data, std::size_t bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image file: " + path);
  in.seekg(0, std::ios::end);
  const auto actual = static_cast<std::size_t>(in.tellg());
  if (actual != bytes) {
    std::ostringstream msg;
    msg << "image " << path << " payload is " << actual << " bytes, header expects " << bytes;
    throw std::runtime_error(msg.str());
  }
  in.seekg(0);
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("failed reading image payload: " + path);
}

// Deterministic pseudo-color for a label: splitmix64 finalizer over
// (palette seed, label).
void label_color(std::uint64_t seed, std::uint32_t label, unsigned char rgb[3]) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(label) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  rgb[0] = static_cast<unsigned char>(z & 0xff);
  rgb[1] = static_cast<unsigned char>((z >> 8) & 0xff);
  rgb[2] = static_cast<unsigned char>((z >> 16) & 0xff);
}

// Raster geometry of a slice: two in-plane axes (ascending order) and the
// linear index of each pixel.  2-D images export whole; 3-D images fix one
// axis.  Pixels go left-to-right along the lower axis, top-to-bottom along
// the higher one.
struct SlicePlan {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::int64_t> linear;  // width * height pixel -> voxel
};

SlicePlan plan_slice(const VoxelGrid& grid, int axis, std::int64_t index) {
  const int d = grid.dim();
  if (d != 2 && d != 3)
    throw std::invalid_argument("slice export supports 2-D and 3-D images only");
  if (d == 2) {
    axis = -1;  // whole image
  } else {
    if (axis < 0 || axis >= d) throw std::invalid_argument("slice axis out of range");
    if (index < 0 || index >= grid.counts[axis])
      throw std::invalid_argument("slice index out of range");
  }

  int ax_x = -1, ax_y = -1;
  for (int i = 0; i < d; ++i) {
    if (i == axis) continue;
    if (ax_x < 0)
      ax_x = i;
    else
      ax_y = i;
  }

  SlicePlan plan;
  plan.width = grid.counts[ax_x];
  plan.height = grid.counts[ax_y];
  plan.linear.reserve(static_cast<std::size_t>(plan.width * plan.height));
  std::int64_t idx[kMaxDim] = {0, 0, 0};
  if (axis >= 0) idx[axis] = index;
  for (std::int64_t y = 0; y < plan.height; ++y) {
    idx[ax_y] = y;
    for (std::int64_t x = 0; x < plan.width; ++x) {
      idx[ax_x] = x;
      plan.linear.push_back(grid.linear_index(idx));
    }
  }
  return plan;
}

}  // namespace

void write_label_image(const std::string& path, const LabelImage& image, const ImageMeta& meta) {
  const std::size_t bytes = image.labels.size() * sizeof(std::uint32_t);
  write_payload(path, image.labels.data(), bytes);
  write_sidecar(path + ".json", sidecar_json(image.grid, meta, "labels", bytes));
}

void write_distance_image(const std::string& path, const DistanceImage& image,
                          const ImageMeta& meta) {
  const std::size_t bytes = image.values.size() * sizeof(double);
  write_payload(path, image.values.data(), bytes);
  write_sidecar(path + ".json", sidecar_json(image.grid, meta, "distances", bytes));
}

LabelImage read_label_image(const std::string& path, ImageMeta* meta) {
  ReadHeader header = read_sidecar(path, "labels");
  const std::size_t expected =
      static_cast<std::size_t>(header.grid.voxel_count()) * sizeof(std::uint32_t);
  if (header.payload_bytes != expected)
    throw std::runtime_error("image sidecar " + path + ".json payload size disagrees with dims");
  LabelImage image;
  image.grid = std::move(header.grid);
  image.labels.resize(static_cast<std::size_t>(image.grid.voxel_count()));
  read_payload(path, image.labels.data(), expected);
  if (meta) *meta = header.meta;
  return image;
}

DistanceImage read_distance_image(const std::string& path, ImageMeta* meta) {
  ReadHeader header = read_sidecar(path, "distances");
  const std::size_t expected = static_cast<std::size_t>(header.grid.voxel_count()) * sizeof(double);
  if (header.payload_bytes != expected)
    throw std::runtime_error("image sidecar " + path + ".json payload size disagrees with dims");
  DistanceImage image;
  image.grid = std::move(header.grid);
  image.values.resize(static_cast<std::size_t>(image.grid.voxel_count()));
  read_payload(path, image.values.data(), expected);
  if (meta) *meta = header.meta;
  return image;
}

void export_slice(const LabelImage& image, int axis, std::int64_t index, const std::string& path,
                  std::uint64_t palette_seed) {
  const SlicePlan plan = plan_slice(image.grid, axis, index);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open slice file for writing: " + path);
  out << "P6\n" << plan.width << ' ' << plan.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(plan.width) * 3);
  for (std::int64_t y = 0; y < plan.height; ++y) {
    for (std::int64_t x = 0; x < plan.width; ++x) {
      const std::int64_t lin = plan.linear[static_cast<std::size_t>(y * plan.width + x)];
      label_color(palette_seed, image.labels[static_cast<std::size_t>(lin)], &row[x * 3]);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("failed writing slice: " + path);
}

void export_slice(const DistanceImage& image, int axis, std::int64_t index,
                  const std::string& path) {
  const SlicePlan plan = plan_slice(image.grid, axis, index);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::int64_t lin : plan.linear) {
    const double v = image.values[static_cast<std::size_t>(lin)];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open slice file for writing: " + path);
  out << "P5\n" << plan.width << ' ' << plan.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(plan.width));
  for (std::int64_t y = 0; y < plan.height; ++y) {
    for (std::int64_t x = 0; x < plan.width; ++x) {
      const std::int64_t lin = plan.linear[static_cast<std::size_t>(y * plan.width + x)];
      const double v = image.values[static_cast<std::size_t>(lin)];
      row[static_cast<std::size_t>(x)] =
          static_cast<unsigned char>(std::lround(255.0 * (v - lo) / span));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("failed writing slice: " + path);
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "run-id,kind,N_v,N_s,param,step1_evals,step2_evals,model_step12,wall_seconds\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << to_string(r.kind) << ',' << r.n_voxels << ',' << r.n_sites << ',';
    if (std::isfinite(r.param)) out << r.param;
    out << ',' << r.step1_evals << ',' << r.step2_evals << ',' << r.model_step12 << ','
        << r.wall_seconds << '\n';
  }
  return out.str();
}

void emit_metrics(const std::string& path, const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open metrics file for writing: " + path);
  out << metrics_csv(rows);
  if (!out) throw std::runtime_error("failed writing metrics: " + path);
}

}  // namespace voxellate
