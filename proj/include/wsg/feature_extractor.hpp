#pragma once

#include <utility>
#include <vector>

#include "wsg/haar_swt.hpp"
#include "wsg/plane.hpp"

namespace wsg {

enum class ScaleRule : int {
  NonDecreasing = 0,  // second-layer scale j2 >= j1
  All = 1
};

struct ExtractorConfig {
  int levels = 4;       // J, wavelet scales per layer
  int orientations = 3; // R, fixed
  int depth = 2;        // D, tree depth (1 or 2)
  int pool_factor = 2;  // applied between layer 1 and layer 2 only
  std::vector<int> image_scales = {1};  // strictly increasing powers of 2
  ScaleRule scale_rule = ScaleRule::NonDecreasing;

  void validate() const;
};

// Path through the feature tree: empty for the root, then (scale,
// orientation) per layer.
struct PathId {
  std::vector<std::pair<int, Orientation>> entries;

  int depth() const { return static_cast<int>(entries.size()); }
  bool operator==(const PathId&) const = default;
  bool operator<(const PathId& o) const;
};

struct FeaturePlane {
  int channel = 0;
  int image_scale = 1;
  PathId path;
  Plane plane;
};

// Full-resolution feature planes in canonical order: image scale ascending,
// channel ascending, path lexicographic (depth first, then entries).
struct FeatureStack {
  int width = 0;
  int height = 0;
  std::vector<FeaturePlane> planes;
};

// (Pf)_{i,j} = f_{s*i, s*j}; dimensions must be divisible by s.
Plane subsample(const Plane& plane, int s);

// Align-corners bilinear interpolation to a target at least as large as the
// source; a singleton axis extends as a constant.
Plane bilinear_upsample(const Plane& plane, int target_w, int target_h);

// Feature maps per channel: 1 + R*J + R^2*J(J+1)/2 for the NonDecreasing
// rule, 1 + R*J + R^2*J^2 for All (depth 2).
int per_channel_map_count(const ExtractorConfig& config);

std::vector<std::pair<PathId, Plane>> extract_channel(const Plane& plane,
                                                      const ExtractorConfig& config);

FeatureStack extract_image(const Image& image, const ExtractorConfig& config);

std::vector<double> pixel_feature(const FeatureStack& stack, int i, int j);

}  // namespace wsg
