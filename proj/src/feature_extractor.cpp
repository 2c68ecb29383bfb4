#include "wsg/feature_extractor.hpp"

#include <algorithm>
#include <cmath>

namespace wsg {

namespace {

constexpr Orientation kDetailOrder[3] = {Orientation::Horizontal,
                                         Orientation::Vertical,
                                         Orientation::Diagonal};

Plane abs_plane(const Plane& p) {
  Plane out = p;
  for (double& v : out.values) v = std::fabs(v);
  return out;
}

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

void ExtractorConfig::validate() const {
  if (levels < 1) throw Error("ExtractorConfig: levels must be >= 1");
  if (orientations != 3) throw Error("ExtractorConfig: orientations fixed at 3");
  if (depth != 1 && depth != 2) throw Error("ExtractorConfig: depth must be 1 or 2");
  if (pool_factor < 1) throw Error("ExtractorConfig: pool_factor must be >= 1");
  if (image_scales.empty()) throw Error("ExtractorConfig: no image scales");
  int prev = 0;
  for (int s : image_scales) {
    if (!is_power_of_two(s)) throw Error("ExtractorConfig: image scales must be powers of 2");
    if (s <= prev) throw Error("ExtractorConfig: image scales must be strictly increasing");
    prev = s;
  }
}

bool PathId::operator<(const PathId& o) const {
  if (entries.size() != o.entries.size()) return entries.size() < o.entries.size();
  for (size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].first != o.entries[k].first)
      return entries[k].first < o.entries[k].first;
    if (entries[k].second != o.entries[k].second)
      return static_cast<int>(entries[k].second) < static_cast<int>(o.entries[k].second);
  }
  return false;
}

Plane subsample(const Plane& plane, int s) {
  if (s < 1) throw Error("subsample: factor must be >= 1");
  if (s == 1) return plane;
  if (plane.width % s != 0 || plane.height % s != 0)
    throw Error("subsample: dimensions not divisible by factor");
  Plane out(plane.width / s, plane.height / s);
  for (int i = 0; i < out.height; ++i)
    for (int j = 0; j < out.width; ++j)
      out.at(i, j) = plane.at(s * i, s * j);
  return out;
}

Plane bilinear_upsample(const Plane& plane, int target_w, int target_h) {
  if (target_w < plane.width || target_h < plane.height)
    throw Error("bilinear_upsample: target smaller than source");
  if (target_w == plane.width && target_h == plane.height) return plane;
  Plane out(target_w, target_h);
  double sx = target_w > 1 && plane.width > 1
                  ? static_cast<double>(plane.width - 1) / (target_w - 1)
                  : 0.0;
  double sy = target_h > 1 && plane.height > 1
                  ? static_cast<double>(plane.height - 1) / (target_h - 1)
                  : 0.0;
  for (int i = 0; i < target_h; ++i) {
    double fy = i * sy;
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, plane.height - 1);
    double wy = fy - y0;
    for (int j = 0; j < target_w; ++j) {
      double fx = j * sx;
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, plane.width - 1);
      double wx = fx - x0;
      out.at(i, j) = (1 - wy) * ((1 - wx) * plane.at(y0, x0) + wx * plane.at(y0, x1)) +
                     wy * ((1 - wx) * plane.at(y1, x0) + wx * plane.at(y1, x1));
    }
  }
  return out;
}

int per_channel_map_count(const ExtractorConfig& config) {
  config.validate();
  int j = config.levels, r = config.orientations;
  int count = 1 + r * j;  // root + depth-1
  if (config.depth == 2) {
    count += (config.scale_rule == ScaleRule::NonDecreasing)
                 ? r * r * j * (j + 1) / 2
                 : r * r * j * j;
  }
  return count;
}

std::vector<std::pair<PathId, Plane>> extract_channel(const Plane& plane,
                                                      const ExtractorConfig& config) {
  config.validate();
  if (plane.width % config.pool_factor != 0 || plane.height % config.pool_factor != 0)
    throw Error("extract_channel: dimensions not divisible by pool factor");
  const int J = config.levels;
  std::vector<std::pair<PathId, Plane>> maps;
  maps.reserve(per_channel_map_count(config));

  SwtPyramid root = swt2d(plane, J);
  maps.emplace_back(PathId{}, root.approx.plane);

  for (int j1 = 1; j1 <= J; ++j1) {
    for (Orientation r1 : kDetailOrder) {
      Plane u1 = subsample(abs_plane(root.detail(j1, r1)), config.pool_factor);
      PathId p1{{{j1, r1}}};
      if (config.depth == 2) {
        SwtPyramid node = swt2d(u1, J);
        maps.emplace_back(p1, bilinear_upsample(node.approx.plane, plane.width,
                                                plane.height));
        int j2_lo = (config.scale_rule == ScaleRule::NonDecreasing) ? j1 : 1;
        for (int j2 = j2_lo; j2 <= J; ++j2) {
          for (Orientation r2 : kDetailOrder) {
            Plane u2 = abs_plane(node.detail(j2, r2));
            PathId p2{{{j1, r1}, {j2, r2}}};
            maps.emplace_back(p2, bilinear_upsample(lowpass_cascade(u2, J),
                                                    plane.width, plane.height));
          }
        }
      } else {
        maps.emplace_back(p1, bilinear_upsample(lowpass_cascade(u1, J),
                                                plane.width, plane.height));
      }
    }
  }
  std::stable_sort(maps.begin(), maps.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return maps;
}

FeatureStack extract_image(const Image& image, const ExtractorConfig& config) {
  config.validate();
  if (image.channels.empty()) throw Error("extract_image: empty image");
  const int w = image.width(), h = image.height();
  int max_scale = config.image_scales.back();
  int multiple = config.pool_factor * max_scale;

  FeatureStack stack;
  stack.width = w;
  stack.height = h;
  for (int s : config.image_scales) {
    for (size_t c = 0; c < image.channels.size(); ++c) {
      Plane padded = pad_circular(image.channels[c], multiple);
      Plane scaled = subsample(padded, s);
      auto maps = extract_channel(scaled, config);
      for (auto& [path, plane] : maps) {
        Plane full = (s == 1 && plane.width == padded.width)
                         ? std::move(plane)
                         : bilinear_upsample(plane, padded.width, padded.height);
        stack.planes.push_back({static_cast<int>(c), s, std::move(path),
                                crop(full, w, h)});
      }
    }
  }
  return stack;
}

std::vector<double> pixel_feature(const FeatureStack& stack, int i, int j) {
  if (i < 0 || j < 0 || i >= stack.height || j >= stack.width)
    throw Error("pixel_feature: coordinates out of bounds");
  std::vector<double> f;
  f.reserve(stack.planes.size());
  for (const auto& fp : stack.planes) f.push_back(fp.plane.at(i, j));
  return f;
}

}  // namespace wsg
