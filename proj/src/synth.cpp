#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "wsg/dataset.hpp"

namespace fs = std::filesystem;

namespace wsg {

namespace {

struct Site {
  double x = 0, y = 0;
  int cls = 0;
};

// Class textures: oriented sinusoid for even classes, checkerboard-like
// product of sinusoids for odd ones; frequencies and orientations spread so
// classes stay distinguishable under wavelet features.
double texture_value(int cls, int classes, double x, double y) {
  double theta = M_PI * cls / classes;
  double freq = 0.12 + 0.07 * cls;
  double u = x * std::cos(theta) + y * std::sin(theta);
  double v = -x * std::sin(theta) + y * std::cos(theta);
  double t;
  if (cls % 2 == 0) {
    t = std::sin(2 * M_PI * freq * u);
  } else {
    t = std::sin(2 * M_PI * freq * u) * std::sin(2 * M_PI * freq * v);
    t = t >= 0 ? 1.0 : -1.0;  // checkerboard
  }
  return 0.5 + 0.3 * t;
}

}  // namespace

DatasetManifest synth_texture_dataset(const SynthConfig& config,
                                      const std::string& out_dir) {
  if (config.classes < 2 || config.classes > 8)
    throw Error("synth: classes must be in 2..8");
  if (config.n_images < 1 || config.width < 8 || config.height < 8)
    throw Error("synth: invalid dimensions");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir))
    throw Error("synth: cannot create output directory " + out_dir);

  std::mt19937_64 rng(config.seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };

  DatasetManifest manifest;
  manifest.base_dir = out_dir;
  manifest.class_count = config.classes;
  for (int k = 0; k < config.classes; ++k)
    manifest.class_names.push_back("texture" + std::to_string(k));

  for (int n = 0; n < config.n_images; ++n) {
    // Few, well-separated sites keep regions large relative to the feature
    // locality scale; thin wedges would be invisible after smoothing.
    int n_sites = std::max(3, config.classes);
    double min_dist = 0.4 * std::min(config.width, config.height);
    std::vector<Site> sites(n_sites);
    for (int s = 0; s < n_sites; ++s) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        // Round-robin class assignment keeps every class represented overall.
        sites[s] = {uniform(0, config.width), uniform(0, config.height),
                    (n + s) % config.classes};
        bool ok = true;
        for (int q = 0; q < s; ++q)
          ok = ok && std::hypot(sites[s].x - sites[q].x, sites[s].y - sites[q].y) >=
                         min_dist;
        if (ok) break;
      }
    }
    double phase_x = uniform(0, 16), phase_y = uniform(0, 16);

    Image img;
    img.channels.assign(3, Plane(config.width, config.height));
    LabelMap labels;
    labels.width = config.width;
    labels.height = config.height;
    labels.labels.resize(static_cast<size_t>(config.width) * config.height);

    for (int i = 0; i < config.height; ++i) {
      for (int j = 0; j < config.width; ++j) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int s = 0; s < n_sites; ++s) {
          double dx = j - sites[s].x, dy = i - sites[s].y;
          double d = dx * dx + dy * dy;
          if (d < best_d) {
            best_d = d;
            best = sites[s].cls;
          }
        }
        labels.at(i, j) = static_cast<uint8_t>(best);
        double t = texture_value(best, config.classes, j + phase_x, i + phase_y);
        double noise = uniform(-0.03, 0.03);
        // Per-class tint: brightness offset plus red/blue differential, laid
        // out on a circle in (lum, chroma) space so that the blurred mixture
        // of any two classes never lands on a third class's tint.
        double ang = 2 * M_PI * best / config.classes + 0.4;
        double lum = 0.25 * std::cos(ang);
        double chroma = 0.3 * std::sin(ang);
        img.channels[0].at(i, j) = std::clamp(t + noise + lum + chroma * 0.5, 0.0, 1.0);
        img.channels[1].at(i, j) = std::clamp(t + noise + lum, 0.0, 1.0);
        img.channels[2].at(i, j) = std::clamp(t + noise + lum - chroma * 0.5, 0.0, 1.0);
      }
    }

    char img_name[32], lbl_name[32];
    std::snprintf(img_name, sizeof img_name, "img_%03d.png", n);
    std::snprintf(lbl_name, sizeof lbl_name, "lbl_%03d.png", n);
    save_image_u8((fs::path(out_dir) / img_name).string(), img);
    save_labels((fs::path(out_dir) / lbl_name).string(), labels);
    manifest.entries.emplace_back(img_name, lbl_name);
  }

  std::string manifest_path = (fs::path(out_dir) / "manifest.txt").string();
  std::ofstream out(manifest_path);
  if (!out) throw Error("synth: cannot write manifest");
  out << "#classes: ";
  for (int k = 0; k < config.classes; ++k)
    out << (k ? "," : "") << manifest.class_names[k];
  out << "\n";
  for (const auto& [img, lbl] : manifest.entries) out << img << "\t" << lbl << "\n";
  return manifest;
}

}  // namespace wsg
