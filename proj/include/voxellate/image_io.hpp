#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voxellate/tessellate.hpp"

namespace voxellate {

// Descriptive fields carried in the JSON sidecar next to each binary image.
struct ImageMeta {
  int format_version = 1;
  std::string type;  // "labels" or "distances"
  Kind kind = Kind::Voronoi;
  std::int64_t n_sites = 0;
  std::int64_t seed = -1;  // -1 when sites did not come from a seeded generator
};

// Binary image files: raw little-endian payload (labels as u32, distances as
// IEEE-754 f64), voxel order row-major with axis 0 fastest, plus a JSON
// sidecar at `<path>.json` holding dimensions, domain, and provenance.  Reads
// verify that the payload size matches the sidecar's dimensions.
void write_label_image(const std::string& path, const LabelImage& image, const ImageMeta& meta);
void write_distance_image(const std::string& path, const DistanceImage& image,
                          const ImageMeta& meta);
LabelImage read_label_image(const std::string& path, ImageMeta* meta = nullptr);
DistanceImage read_distance_image(const std::string& path, ImageMeta* meta = nullptr);

// Writes a 2-D slice as a portable pixmap: labels map to pseudo-colors drawn
// from a seeded palette (PPM), distance values to a normalized gray ramp
// (PGM).  2-D images export whole; 3-D images fix `axis` at `index`.
void export_slice(const LabelImage& image, int axis, std::int64_t index,
                  const std::string& path, std::uint64_t palette_seed = 0);
void export_slice(const DistanceImage& image, int axis, std::int64_t index,
                  const std::string& path);

struct MetricsRow {
  std::string run_id;
  Kind kind = Kind::Voronoi;
  std::int64_t n_voxels = 0;
  std::int64_t n_sites = 0;
  double param = 0.0;  // r0 or t0; NaN emits an empty cell (brute engine)
  std::uint64_t step1_evals = 0;
  std::uint64_t step2_evals = 0;
  double model_step12 = 0.0;
  double wall_seconds = 0.0;
};

// CSV with header run-id,kind,N_v,N_s,param,step1_evals,step2_evals,
// model_step12,wall_seconds; one row per entry.
void emit_metrics(const std::string& path, const std::vector<MetricsRow>& rows);
std::string metrics_csv(const std::vector<MetricsRow>& rows);

}  // namespace voxellate
