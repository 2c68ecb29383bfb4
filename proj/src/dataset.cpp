#include "wsg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace wsg {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

std::string DatasetManifest::image_path(size_t idx) const {
  return (fs::path(base_dir) / entries[idx].first).string();
}

std::string DatasetManifest::label_path(size_t idx) const {
  return (fs::path(base_dir) / entries[idx].second).string();
}

Image rgb_to_yuv(const Image& image) {
  if (image.channels.size() != 3) throw Error("rgb_to_yuv: expected 3 channels");
  Image out;
  int w = image.width(), h = image.height();
  out.channels.assign(3, Plane(w, h));
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      double r = image.channels[0].at(i, j);
      double g = image.channels[1].at(i, j);
      double b = image.channels[2].at(i, j);
      double y = 0.299 * r + 0.587 * g + 0.114 * b;
      double u = (b - y) * 0.565 + 0.5;
      double v = (r - y) * 0.713 + 0.5;
      out.channels[0].at(i, j) = std::clamp(y, 0.0, 1.0);
      out.channels[1].at(i, j) = std::clamp(u, 0.0, 1.0);
      out.channels[2].at(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  DatasetManifest m;
  m.base_dir = fs::path(path).parent_path().string();
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string tag = "#classes:";
      if (t.rfind(tag, 0) == 0) {
        m.class_names = split(t.substr(tag.size()), ',');
        m.class_count = static_cast<int>(m.class_names.size());
      }
      continue;
    }
    size_t tab = t.find('\t');
    if (tab == std::string::npos)
      throw Error("manifest record missing TAB separator: " + t);
    m.entries.emplace_back(trim(t.substr(0, tab)), trim(t.substr(tab + 1)));
  }
  for (size_t idx = 0; idx < m.entries.size(); ++idx) {
    if (!fs::exists(m.image_path(idx)))
      throw Error("manifest references missing image: " + m.image_path(idx));
    if (!fs::exists(m.label_path(idx)))
      throw Error("manifest references missing label file: " + m.label_path(idx));
  }
  return m;
}

void resolve_classes(DatasetManifest& manifest) {
  if (manifest.class_count > 0) return;
  int max_label = -1;
  for (size_t idx = 0; idx < manifest.entries.size(); ++idx) {
    LabelMap lm = load_labels(manifest.label_path(idx), kVoidLabel);
    for (uint8_t v : lm.labels)
      if (v != kVoidLabel) max_label = std::max(max_label, static_cast<int>(v));
  }
  if (max_label < 0) throw Error("dataset has no labeled pixels");
  manifest.class_count = max_label + 1;
  manifest.class_names.clear();
  for (int k = 0; k < manifest.class_count; ++k)
    manifest.class_names.push_back("class" + std::to_string(k));
}

std::vector<PixelRef> sample_training_pixels(const DatasetManifest& manifest,
                                             double fraction, uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw Error("sample fraction must be in (0, 1]");
  std::vector<PixelRef> eligible;
  for (size_t idx = 0; idx < manifest.entries.size(); ++idx) {
    LabelMap lm = load_labels(manifest.label_path(idx), manifest.class_count);
    for (int i = 0; i < lm.height; ++i)
      for (int j = 0; j < lm.width; ++j) {
        uint8_t v = lm.at(i, j);
        if (v != kVoidLabel)
          eligible.push_back({static_cast<int>(idx), i, j, v});
      }
  }
  if (eligible.empty()) throw Error("no eligible (non-void) pixels to sample");
  size_t n = static_cast<size_t>(std::llround(fraction * eligible.size()));
  n = std::clamp<size_t>(n, 1, eligible.size());

  // Partial Fisher-Yates: the first n slots become the sample.
  std::mt19937_64 rng(seed);
  for (size_t k = 0; k < n; ++k) {
    std::uniform_int_distribution<size_t> pick(k, eligible.size() - 1);
    std::swap(eligible[k], eligible[pick(rng)]);
  }
  eligible.resize(n);
  return eligible;
}

}  // namespace wsg
