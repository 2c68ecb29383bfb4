#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsg/plane.hpp"

namespace wsg {

constexpr int kVoidLabel = 255;

struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> labels;  // class indices or kVoidLabel

  uint8_t at(int i, int j) const { return labels[static_cast<size_t>(i) * width + j]; }
  uint8_t& at(int i, int j) { return labels[static_cast<size_t>(i) * width + j]; }
};

struct DatasetManifest {
  std::string base_dir;
  std::vector<std::pair<std::string, std::string>> entries;  // image, label paths
  int class_count = 0;                 // 0 until resolved
  std::vector<std::string> class_names;

  std::string image_path(size_t idx) const;
  std::string label_path(size_t idx) const;
};

// PNG I/O. Images: 1/3/4 channels, 8- or 16-bit, scaled to [0,1] by the
// bit-depth maximum. Labels: single-channel 8-bit, 255 = void.
Image load_image(const std::string& path);
LabelMap load_labels(const std::string& path, int class_count);
void save_labels(const std::string& path, const LabelMap& labels);
void save_image_u8(const std::string& path, const Image& image);
void save_plane_u16(const std::string& path, const Plane& plane);

// BT.601 full range: Y = .299R + .587G + .114B, U = (B-Y)*.565 + .5,
// V = (R-Y)*.713 + .5, clamped to [0,1].
Image rgb_to_yuv(const Image& image);

// Manifest: one `<image><TAB><label>` record per line, `#` comments, paths
// relative to the manifest. An optional `#classes: a,b,c` line names the
// classes.
DatasetManifest load_manifest(const std::string& path);

// Resolves class_count/class_names by scanning label files when the manifest
// declares none.
void resolve_classes(DatasetManifest& manifest);

struct PixelRef {
  int image_index = 0;
  int i = 0;
  int j = 0;
  int label = 0;
};

// Uniform sample without replacement over all non-void labeled pixels across
// the manifest; size = round(fraction * eligible count).
std::vector<PixelRef> sample_training_pixels(const DatasetManifest& manifest,
                                             double fraction, uint64_t seed);

struct SynthConfig {
  int n_images = 25;
  int classes = 3;
  int width = 96;
  int height = 96;
  uint64_t seed = 0;
};

// Deterministic synthetic dataset: each image is partitioned into random
// polygonal (Voronoi) regions filled with class-specific oriented textures
// plus mild noise; labels follow the regions exactly.
DatasetManifest synth_texture_dataset(const SynthConfig& config,
                                      const std::string& out_dir);

}  // namespace wsg
