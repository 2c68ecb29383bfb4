#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wsg/dataset.hpp"
#include "wsg/metrics.hpp"
#include "wsg/model_io.hpp"

namespace wsg {

// All pipeline tunables with the architecture's default configuration.
struct RunConfig {
  ExtractorConfig extractor;
  ColorMode color_mode = ColorMode::Yuv;
  double gamma = 10.0;
  double lambda = 1e-5;
  int m_tilde = 5000;
  double sample_fraction = 0.02;
  int epochs = 5;
  uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct TrainStats {
  int feature_dim = 0;
  size_t sample_count = 0;
  double final_objective = 0;
  size_t model_bytes = 0;
};

using LogFn = std::function<void(const std::string&)>;

// load -> (optional RGB->YUV) -> extract -> sample -> RFF -> SGD ->
// serialize. Never leaves a partial model file behind.
TrainStats run_train(const DatasetManifest& manifest, const RunConfig& config,
                     const std::string& out_path, const LogFn& log = nullptr);

ModelBundle train_in_memory(const DatasetManifest& manifest, const RunConfig& config,
                            TrainStats* stats = nullptr, const LogFn& log = nullptr);

// Per-pixel class scores and argmax labels for one image.
LabelMap predict_labels(const ModelBundle& model, const Image& image, int threads,
                        std::vector<Plane>* score_planes = nullptr);

void run_predict(const std::string& model_path, const std::string& image_path,
                 const std::string& out_label_path,
                 const std::string& score_dir /* empty = none */, int threads);

// Per-class score planes as affinely rescaled 16-bit PNGs plus a sidecar
// recording each plane's scale.
void write_score_planes(const std::string& score_dir,
                        const std::vector<Plane>& scores);

struct EvalResult {
  ConfusionMatrix cm;
  std::string report;
};

EvalResult run_eval(const ModelBundle& model, const DatasetManifest& manifest,
                    double boundary_radius, int threads, const LogFn& log = nullptr);

struct TunePoint {
  double gamma = 0;
  double lambda = 0;
  double accuracy = 0;
};

struct TuneResult {
  double best_gamma = 0;
  double best_lambda = 0;
  std::vector<TunePoint> table;
};

// Trains each grid point on a holdout split of the manifest images and scores
// validation pixel accuracy; ties break toward smaller gamma then lambda.
TuneResult run_tune(const DatasetManifest& manifest, const RunConfig& config,
                    const std::vector<double>& gamma_grid,
                    const std::vector<double>& lambda_grid,
                    double holdout_fraction, const LogFn& log = nullptr);

struct BenchResult {
  OpReport nominal;      // closed-form cost model (R^2 J^2 second-layer maps)
  OpReport configured;   // same formulas with the configured path counts
  double extract_seconds = 0;
  double rff_seconds = 0;
  double classify_seconds = 0;
};

BenchResult run_bench(int width, int height, int channels, const RunConfig& config);
std::string format_bench(const BenchResult& bench);

}  // namespace wsg
