// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wsg.h"
#include "wsg/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wsg;

namespace {

std::mt19937_64 g_rng(0xACCE57);

Plane random_plane(int w, int h) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Plane p(w, h);
  for (double& v : p.values) v = dist(g_rng);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

// -- criterion 1: tight-frame energy ----------------------------------------

bool tight_frame(std::string& detail) {
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    Plane p = random_plane(64, 64);
    double ratio = bessel_energy_ratio(swt2d(p, 4), p);
    worst = std::max(worst, std::fabs(ratio - 1.0));
  }
  std::ostringstream os;
  os << "max |ratio - 1| = " << worst << " over 50 random 64x64 planes";
  detail = os.str();
  return worst <= 1e-6;
}

// -- criterion 2: a-trous vs direct oracle ----------------------------------

bool atrous_oracle(std::string& detail) {
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    int w = 4 + static_cast<int>(g_rng() % 29);
    int h = 4 + static_cast<int>(g_rng() % 29);
    int levels = 1 + static_cast<int>(g_rng() % 3);
    Plane p = random_plane(w, h);
    SwtPyramid fast = swt2d(p, levels);
    SwtPyramid direct = swt2d_direct(p, levels);
    for (size_t s = 0; s < fast.details.size(); ++s)
      for (size_t k = 0; k < fast.details[s].plane.size(); ++k)
        worst = std::max(worst, std::fabs(fast.details[s].plane.values[k] -
                                          direct.details[s].plane.values[k]));
    for (size_t k = 0; k < fast.approx.plane.size(); ++k)
      worst = std::max(worst, std::fabs(fast.approx.plane.values[k] -
                                        direct.approx.plane.values[k]));
  }
  std::ostringstream os;
  os << "max |swt2d - swt2d_direct| = " << worst << " over 100 planes";
  detail = os.str();
  return worst <= 1e-10;
}

// -- criterion 3: feature dimensions ----------------------------------------

bool feature_dims(std::string& detail) {
  ExtractorConfig c;
  int single = 3 * per_channel_map_count(c);
  c.image_scales = {1, 2, 4};
  int multi = 3 * 3 * per_channel_map_count(c);
  c.image_scales = {1};
  int aerial = 4 * per_channel_map_count(c);
  detail = "m = " + std::to_string(single) + " / " + std::to_string(multi) + " / " +
           std::to_string(aerial) + " (expected 309 / 927 / 412)";
  return single == 309 && multi == 927 && aerial == 412;
}

// -- criterion 4: operation count -------------------------------------------

bool op_count(std::string& detail) {
  double total = nominal_op_count(320, 240, 4, 3, 3).total_ops;
  std::ostringstream os;
  os << "total = " << total / 1e6 << " MOp (expected 387.072 +- 0.5%)";
  detail = os.str();
  return std::fabs(total - 387.072e6) <= 0.005 * 387.072e6;
}

// -- criterion 5: RFF kernel concentration ----------------------------------

bool rff_concentration(std::string& detail) {
  const int m_tilde = 5000, m = 20;
  const double gamma = 0.7;
  RffProjection proj = rff_generate(RffConfig{m_tilde, gamma, 20250826}, m);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  double mean_err = 0, max_err = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(m), y(m);
    for (double& v : x) v = dist(g_rng);
    for (double& v : y) v = dist(g_rng);
    std::vector<double> px = rff_transform(x, proj, gamma);
    std::vector<double> py = rff_transform(y, proj, gamma);
    double approx = 0, d2 = 0;
    for (int k = 0; k < m_tilde; ++k) approx += px[k] * py[k];
    for (int k = 0; k < m; ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
    double err = std::fabs(approx - std::exp(-gamma * gamma * d2 / 2.0));
    mean_err += err;
    max_err = std::max(max_err, err);
  }
  mean_err /= 200;
  std::ostringstream os;
  os << "mean err = " << mean_err << " (<= 0.02), max err = " << max_err
     << " (<= 0.08)";
  detail = os.str();
  return mean_err <= 0.02 && max_err <= 0.08;
}

// -- criterion 6: SVM sanity ------------------------------------------------

bool svm_sanity(std::string& detail) {
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<TrainSample> samples;
  for (int k = 0; k < 200; ++k) {
    int cls = k % 2;
    samples.push_back({{(cls ? 5.0 : -5.0) + noise(g_rng), noise(g_rng)}, cls});
  }
  LinearModel model = svm_train(samples, 2, TrainConfig{1e-3, 5, 42, 0});
  int hits = 0;
  for (const auto& s : samples)
    if (predict_class(model, s.features) == s.label) ++hits;
  double acc = static_cast<double>(hits) / samples.size();
  double objective = hinge_objective(model, samples, 1e-3);
  std::ostringstream os;
  os << "train acc = " << acc << " (>= 0.99), objective = " << objective
     << " (<= 1.0 = zero model)";
  detail = os.str();
  return acc >= 0.99 && objective <= 1.0;
}

// -- criteria 7-9 share the synthetic dataset -------------------------------

struct EndToEnd {
  fs::path dir;
  std::string train_manifest;
  std::string test_manifest;
  bool ready = false;
};

EndToEnd g_e2e;

bool setup_e2e(std::string& err) {
  if (g_e2e.ready) return true;
  g_e2e.dir = fs::temp_directory_path() / "wsg_acceptance";
  fs::remove_all(g_e2e.dir);
  std::string data = (g_e2e.dir / "data").string();
  if (wsg_synth(25, 3, 96, 96, 2024, data.c_str()) != WSG_OK) {
    err = wsg_last_error();
    return false;
  }
  // Split the generated manifest into 20 train / 5 test images.
  DatasetManifest full = load_manifest((fs::path(data) / "manifest.txt").string());
  auto write_split = [&full, &data](const std::string& name, size_t begin, size_t end) {
    std::ofstream out(fs::path(data) / name);
    out << "#classes: ";
    for (int k = 0; k < full.class_count; ++k)
      out << (k ? "," : "") << full.class_names[k];
    out << "\n";
    for (size_t idx = begin; idx < end; ++idx)
      out << full.entries[idx].first << "\t" << full.entries[idx].second << "\n";
    return (fs::path(data) / name).string();
  };
  g_e2e.train_manifest = write_split("train.txt", 0, 20);
  g_e2e.test_manifest = write_split("test.txt", 20, 25);
  g_e2e.ready = true;
  return true;
}

bool end_to_end(std::string& detail) {
  if (!setup_e2e(detail)) return false;
  wsg_run_config config;
  wsg_run_config_init(&config);  // default config, 1 scale

  std::string model_path = (g_e2e.dir / "model.bin").string();
  wsg_train_stats stats{};
  if (wsg_train(g_e2e.train_manifest.c_str(), &config, model_path.c_str(), &stats) !=
      WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  wsg_model* model = nullptr;
  if (wsg_model_open(model_path.c_str(), &model) != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  // Pixel accuracy under the standard protocol: errors within a 3-pixel
  // radius of true category boundaries are excluded (the default radius).
  double acc = 0, f1 = 0;
  wsg_status s = wsg_eval(model, g_e2e.test_manifest.c_str(), 3.0, 1,
                          (g_e2e.dir / "report.txt").string().c_str(), &acc, &f1);
  wsg_model_close(model);
  if (s != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }

  // Majority-class baseline over the test-set truth.
  DatasetManifest test = load_manifest(g_e2e.test_manifest);
  std::vector<uint64_t> counts(test.class_count, 0);
  for (size_t idx = 0; idx < test.entries.size(); ++idx) {
    LabelMap lm = load_labels(test.label_path(idx), test.class_count);
    for (uint8_t v : lm.labels)
      if (v != kVoidLabel) counts[v]++;
  }
  uint64_t total = 0, top = 0;
  for (uint64_t c : counts) {
    total += c;
    top = std::max(top, c);
  }
  double baseline = static_cast<double>(top) / total;

  std::ostringstream os;
  os << "test pixel acc = " << acc << " (>= 0.90), majority baseline = " << baseline
     << " (acc / baseline = " << acc / baseline << ", far-above-chance gate)";
  detail = os.str();
  // With 3 mandated classes the majority baseline is >= 1/3, so a literal
  // 3x-baseline bound exceeds 1 and no classifier can meet it; the stated
  // qualitative gate (far above chance, acc >= 0.90) governs.
  return acc >= 0.90;
}

bool model_footprint(std::string& detail) {
  fs::path dir = fs::temp_directory_path() / "wsg_acceptance_k8";
  fs::remove_all(dir);
  std::string data = (dir / "data").string();
  if (wsg_synth(8, 8, 48, 48, 9, data.c_str()) != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  wsg_run_config config;
  wsg_run_config_init(&config);
  config.sample_fraction = 0.02;
  std::string model_path = (dir / "model.bin").string();
  if (wsg_train((fs::path(data) / "manifest.txt").string().c_str(), &config,
                model_path.c_str(), nullptr) != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  size_t size = fs::file_size(model_path);
  size_t payload = 4ull * 8 * (5000 + 1);
  size_t header = size - payload - 8;  // trailing checksum
  std::ostringstream os;
  os << "model file = " << size << " bytes (< 350000), payload = " << payload
     << " = 4*K*(m~+1), header = " << header << " bytes";
  detail = os.str();
  return size < 350000 && size > payload && header < 1024;
}

bool determinism(std::string& detail) {
  if (!setup_e2e(detail)) return false;
  wsg_run_config config;
  wsg_run_config_init(&config);
  config.m_tilde = 600;  // keep the double train affordable

  std::string m1 = (g_e2e.dir / "det1.bin").string();
  std::string m2 = (g_e2e.dir / "det2.bin").string();
  if (wsg_train(g_e2e.train_manifest.c_str(), &config, m1.c_str(), nullptr) != WSG_OK ||
      wsg_train(g_e2e.train_manifest.c_str(), &config, m2.c_str(), nullptr) != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  bool models_identical = read_file(m1) == read_file(m2);

  wsg_model* model = nullptr;
  if (wsg_model_open(m1.c_str(), &model) != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  DatasetManifest test = load_manifest(g_e2e.test_manifest);
  std::string p1 = (g_e2e.dir / "pred_t1.png").string();
  std::string p4 = (g_e2e.dir / "pred_t4.png").string();
  wsg_status s1 = wsg_predict(model, test.image_path(0).c_str(), p1.c_str(), nullptr, 1);
  wsg_status s4 = wsg_predict(model, test.image_path(0).c_str(), p4.c_str(), nullptr, 4);
  double acc1 = 0, acc4 = 0;
  wsg_eval(model, g_e2e.test_manifest.c_str(), 3.0, 1, nullptr, &acc1, nullptr);
  wsg_eval(model, g_e2e.test_manifest.c_str(), 3.0, 4, nullptr, &acc4, nullptr);
  wsg_model_close(model);
  if (s1 != WSG_OK || s4 != WSG_OK) {
    detail = wsg_last_error();
    return false;
  }
  bool predictions_identical = read_file(p1) == read_file(p4);
  bool eval_identical = acc1 == acc4;

  std::ostringstream os;
  os << "model files byte-identical: " << (models_identical ? "yes" : "NO")
     << "; predictions identical across 1 vs 4 workers: "
     << (predictions_identical ? "yes" : "NO")
     << "; eval identical: " << (eval_identical ? "yes" : "NO");
  detail = os.str();
  return models_identical && predictions_identical && eval_identical;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 tight-frame energy (B = 1)", tight_frame},
      {"2 a-trous vs direct-convolution oracle", atrous_oracle},
      {"3 feature dimensions 309 / 927 / 412", feature_dims},
      {"4 op-count model 387.072 MOp", op_count},
      {"5 RFF kernel concentration at m~ = 5000", rff_concentration},
      {"6 SVM sanity on separable blobs", svm_sanity},
      {"7 end-to-end synthetic segmentation", end_to_end},
      {"8 model footprint K = 8, m~ = 5000", model_footprint},
      {"9 determinism across runs and worker counts", determinism},
  };
  int failures = 0;
  for (auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %s — %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("criterion 10 (Stanford Background reproduction) is optional and "
              "requires external data; see README.\n");
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
