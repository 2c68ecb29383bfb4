#include "wsg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace wsg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void log_line(const LogFn& log, const std::string& msg) {
  if (log) log(msg);
}

Image prepare_image(const Image& raw, ColorMode mode) {
  if (mode == ColorMode::Yuv) {
    if (raw.channels.size() != 3)
      throw Error("YUV color mode requires a 3-channel image");
    return rgb_to_yuv(raw);
  }
  return raw;
}

// Scores for a contiguous pixel range; outputs are disjoint per pixel, so the
// result is independent of how the range is partitioned.
void score_range(const FeatureStack& stack, const RffProjection& proj,
                 const ModelBundle& model, size_t begin, size_t end,
                 LabelMap& labels, std::vector<Plane>* score_planes) {
  const int w = stack.width;
  for (size_t p = begin; p < end; ++p) {
    int i = static_cast<int>(p) / w;
    int j = static_cast<int>(p) % w;
    std::vector<double> f = pixel_feature(stack, i, j);
    std::vector<double> phi = rff_transform(f, proj, model.rff.gamma);
    std::vector<double> scores = predict_scores(model.linear, phi);
    labels.labels[p] = static_cast<uint8_t>(argmax_class(scores));
    if (score_planes)
      for (int k = 0; k < model.linear.class_count; ++k)
        (*score_planes)[k].values[p] = scores[k];
  }
}

std::vector<TrainSample> collect_samples(const DatasetManifest& manifest,
                                         const RunConfig& config,
                                         const RffProjection& proj, int* feature_dim,
                                         const LogFn& log) {
  std::vector<PixelRef> pixels =
      sample_training_pixels(manifest, config.sample_fraction, config.seed);
  std::sort(pixels.begin(), pixels.end(), [](const PixelRef& a, const PixelRef& b) {
    if (a.image_index != b.image_index) return a.image_index < b.image_index;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<TrainSample> samples;
  samples.reserve(pixels.size());
  size_t cursor = 0;
  // One image's feature stack in memory at a time.
  for (size_t idx = 0; idx < manifest.entries.size() && cursor < pixels.size(); ++idx) {
    if (pixels[cursor].image_index != static_cast<int>(idx)) continue;
    Image img = prepare_image(load_image(manifest.image_path(idx)), config.color_mode);
    FeatureStack stack = extract_image(img, config.extractor);
    *feature_dim = static_cast<int>(stack.planes.size());
    while (cursor < pixels.size() &&
           pixels[cursor].image_index == static_cast<int>(idx)) {
      const PixelRef& px = pixels[cursor++];
      std::vector<double> f = pixel_feature(stack, px.i, px.j);
      samples.push_back({rff_transform(f, proj, config.gamma), px.label});
    }
    log_line(log, "features: " + manifest.entries[idx].first + " (" +
                      std::to_string(cursor) + "/" + std::to_string(pixels.size()) +
                      " samples)");
  }
  return samples;
}

int probe_feature_dim(const DatasetManifest& manifest, const RunConfig& config) {
  Image img = prepare_image(load_image(manifest.image_path(0)), config.color_mode);
  return static_cast<int>(img.channels.size()) *
         static_cast<int>(config.extractor.image_scales.size()) *
         per_channel_map_count(config.extractor);
}

DatasetManifest subset_manifest(const DatasetManifest& src,
                                const std::vector<size_t>& indices) {
  DatasetManifest out;
  out.base_dir = src.base_dir;
  out.class_count = src.class_count;
  out.class_names = src.class_names;
  for (size_t idx : indices) out.entries.push_back(src.entries[idx]);
  return out;
}

}  // namespace

void RunConfig::validate() const {
  extractor.validate();
  if (!(gamma > 0)) throw Error("RunConfig: gamma must be positive");
  if (!(lambda > 0)) throw Error("RunConfig: lambda must be positive");
  if (m_tilde < 1) throw Error("RunConfig: m_tilde must be >= 1");
  if (!(sample_fraction > 0) || sample_fraction > 1)
    throw Error("RunConfig: sample fraction must be in (0, 1]");
  if (epochs < 1) throw Error("RunConfig: epochs must be >= 1");
  if (threads < 1) throw Error("RunConfig: threads must be >= 1");
}

ModelBundle train_in_memory(const DatasetManifest& manifest, const RunConfig& config,
                            TrainStats* stats, const LogFn& log) {
  config.validate();
  if (manifest.entries.empty()) throw Error("train: empty manifest");
  DatasetManifest resolved = manifest;
  resolve_classes(resolved);

  int feature_dim = probe_feature_dim(resolved, config);
  RffConfig rff{config.m_tilde, config.gamma, config.seed};
  RffProjection proj = rff_generate(rff, feature_dim);
  log_line(log, "feature dimension m = " + std::to_string(feature_dim) +
                    ", RFF dimension = " + std::to_string(config.m_tilde));

  int observed_dim = 0;
  std::vector<TrainSample> samples =
      collect_samples(resolved, config, proj, &observed_dim, log);
  if (observed_dim != feature_dim)
    throw Error("internal: feature dimension mismatch between probe and extraction");
  log_line(log, "training samples: " + std::to_string(samples.size()));

  TrainConfig tc{config.lambda, config.epochs, config.seed, 0};
  LinearModel linear = svm_train(samples, resolved.class_count, tc);
  double objective = hinge_objective(linear, samples, config.lambda);
  log_line(log, "final objective: " + std::to_string(objective));

  ModelBundle bundle;
  bundle.extractor = config.extractor;
  bundle.channel_count = config.color_mode == ColorMode::Yuv
                             ? 3
                             : static_cast<int>(
                                   load_image(resolved.image_path(0)).channels.size());
  bundle.color_mode = config.color_mode;
  bundle.rff = rff;
  bundle.class_names = resolved.class_names;
  bundle.linear = std::move(linear);

  if (stats) {
    stats->feature_dim = feature_dim;
    stats->sample_count = samples.size();
    stats->final_objective = objective;
  }
  return bundle;
}

TrainStats run_train(const DatasetManifest& manifest, const RunConfig& config,
                     const std::string& out_path, const LogFn& log) {
  TrainStats stats;
  ModelBundle bundle = train_in_memory(manifest, config, &stats, log);
  serialize_model(bundle, out_path);
  stats.model_bytes = static_cast<size_t>(fs::file_size(out_path));
  log_line(log, "model written: " + out_path + " (" +
                    std::to_string(stats.model_bytes) + " bytes)");
  return stats;
}

LabelMap predict_labels(const ModelBundle& model, const Image& image, int threads,
                        std::vector<Plane>* score_planes) {
  if (static_cast<int>(image.channels.size()) != model.channel_count)
    throw Error("predict: image channel count does not match model");
  Image prepared = prepare_image(image, model.color_mode);
  FeatureStack stack = extract_image(prepared, model.extractor);
  RffProjection proj = rff_generate(model.rff, static_cast<int>(stack.planes.size()));
  if (model.linear.feature_dim != model.rff.m_tilde)
    throw Error("predict: model dimensions inconsistent");

  LabelMap labels;
  labels.width = stack.width;
  labels.height = stack.height;
  labels.labels.resize(static_cast<size_t>(stack.width) * stack.height);
  if (score_planes)
    score_planes->assign(model.linear.class_count, Plane(stack.width, stack.height));

  size_t n = labels.labels.size();
  int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    score_range(stack, proj, model, 0, n, labels, score_planes);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      size_t begin = t * chunk, end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(score_range, std::cref(stack), std::cref(proj),
                        std::cref(model), begin, end, std::ref(labels), score_planes);
    }
    for (auto& th : pool) th.join();
  }
  return labels;
}

void run_predict(const std::string& model_path, const std::string& image_path,
                 const std::string& out_label_path, const std::string& score_dir,
                 int threads) {
  ModelBundle model = deserialize_model(model_path);
  Image image = load_image(image_path);
  std::vector<Plane> scores;
  LabelMap labels = predict_labels(model, image, threads,
                                   score_dir.empty() ? nullptr : &scores);
  save_labels(out_label_path, labels);

  if (!score_dir.empty()) write_score_planes(score_dir, scores);
}

void write_score_planes(const std::string& score_dir,
                        const std::vector<Plane>& scores) {
  fs::create_directories(score_dir);
  std::ofstream sidecar(fs::path(score_dir) / "scale.txt");
  for (size_t k = 0; k < scores.size(); ++k) {
    double lo = scores[k].values[0], hi = lo;
    for (double v : scores[k].values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;
    Plane scaled = scores[k];
    for (double& v : scaled.values) v = (v - lo) / span;
    std::string name = "score_" + std::to_string(k) + ".png";
    save_plane_u16((fs::path(score_dir) / name).string(), scaled);
    sidecar << name << " raw = stored/65535 * " << span << " + " << lo << "\n";
  }
}

EvalResult run_eval(const ModelBundle& model, const DatasetManifest& manifest,
                    double boundary_radius, int threads, const LogFn& log) {
  DatasetManifest resolved = manifest;
  resolve_classes(resolved);
  if (resolved.class_count != model.linear.class_count)
    throw Error("eval: manifest class count does not match model");

  ConfusionMatrix total(resolved.class_count);
  for (size_t idx = 0; idx < resolved.entries.size(); ++idx) {
    Image image = load_image(resolved.image_path(idx));
    LabelMap truth = load_labels(resolved.label_path(idx), resolved.class_count);
    LabelMap pred = predict_labels(model, image, threads);
    auto mask = boundary_exclusion_mask(truth, boundary_radius);
    total.merge(confusion_matrix(pred, truth, mask, resolved.class_count));
    log_line(log, "evaluated: " + resolved.entries[idx].first);
  }
  return {total, format_report(total, resolved.class_names)};
}

TuneResult run_tune(const DatasetManifest& manifest, const RunConfig& config,
                    const std::vector<double>& gamma_grid,
                    const std::vector<double>& lambda_grid, double holdout_fraction,
                    const LogFn& log) {
  if (gamma_grid.empty() || lambda_grid.empty())
    throw Error("tune: empty parameter grid");
  if (!(holdout_fraction > 0) || holdout_fraction >= 1)
    throw Error("tune: holdout fraction must be in (0, 1)");
  DatasetManifest resolved = manifest;
  resolve_classes(resolved);
  size_t n = resolved.entries.size();
  size_t n_val = std::clamp<size_t>(
      static_cast<size_t>(std::llround(holdout_fraction * n)), 1, n - 1);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed ^ 0x74756e65ull);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<size_t> train_idx(order.begin() + n_val, order.end());
  DatasetManifest train_set = subset_manifest(resolved, train_idx);
  DatasetManifest val_set = subset_manifest(resolved, val_idx);

  std::vector<double> gammas = gamma_grid, lambdas = lambda_grid;
  std::sort(gammas.begin(), gammas.end());
  std::sort(lambdas.begin(), lambdas.end());

  TuneResult result;
  double best_acc = -1;
  for (double gamma : gammas) {
    for (double lambda : lambdas) {
      RunConfig point = config;
      point.gamma = gamma;
      point.lambda = lambda;
      ModelBundle model = train_in_memory(train_set, point);
      EvalResult ev = run_eval(model, val_set, 0.0, config.threads);
      double acc = 0;
      pixel_accuracy(ev.cm, &acc);
      result.table.push_back({gamma, lambda, acc});
      log_line(log, "tune gamma=" + std::to_string(gamma) + " lambda=" +
                        std::to_string(lambda) + " acc=" + std::to_string(acc));
      if (acc > best_acc) {  // grids sorted, so first best wins ties
        best_acc = acc;
        result.best_gamma = gamma;
        result.best_lambda = lambda;
      }
    }
  }
  return result;
}

BenchResult run_bench(int width, int height, int channels, const RunConfig& config) {
  config.validate();
  if (width < 1 || height < 1 || channels < 1) throw Error("bench: invalid size");
  BenchResult bench;
  bench.nominal = nominal_op_count(width, height, config.extractor.levels,
                               config.extractor.orientations, channels);

  // Same cost formulas, second-layer map count taken from the configured
  // path rule, summed over image scales.
  {
    const ExtractorConfig& ex = config.extractor;
    double j = ex.levels, r = ex.orientations;
    int depth2 = (ex.depth == 2)
                     ? (ex.scale_rule == ScaleRule::NonDecreasing
                            ? ex.orientations * ex.orientations * ex.levels *
                                  (ex.levels + 1) / 2
                            : ex.orientations * ex.orientations * ex.levels * ex.levels)
                     : 0;
    double full_wh = static_cast<double>(width) * height;
    OpReport rep;
    for (int s : ex.image_scales) {
      double wh = full_wh / (static_cast<double>(s) * s);
      rep.swt_additions += channels * (6.0 * wh * j + 1.5 * wh * r * j * j);
      rep.chi_additions += channels * (0.5 * wh * j * depth2);
      rep.abs_ops += channels * (wh * r * j + wh / 4.0 * depth2);
      int interpolated = (s == 1) ? static_cast<int>(r * j) + depth2
                                  : 1 + static_cast<int>(r * j) + depth2;
      rep.interpolation_ops += channels * (8.0 * full_wh * interpolated);
    }
    rep.total_ops =
        rep.swt_additions + rep.chi_additions + rep.abs_ops + rep.interpolation_ops;
    bench.configured = rep;
  }

  // Wall-clock timings on a synthetic image; RFF/classification measured on a
  // pixel sample and scaled to the full image.
  std::mt19937_64 rng(config.seed);
  Image img;
  for (int c = 0; c < channels; ++c) {
    Plane p(width, height);
    for (double& v : p.values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    img.channels.push_back(std::move(p));
  }
  auto t0 = Clock::now();
  FeatureStack stack = extract_image(img, config.extractor);
  bench.extract_seconds = seconds_since(t0);

  RffConfig rffc{config.m_tilde, config.gamma, config.seed};
  RffProjection proj = rff_generate(rffc, static_cast<int>(stack.planes.size()));
  LinearModel lin;
  lin.class_count = 8;
  lin.feature_dim = config.m_tilde;
  lin.weights.assign(static_cast<size_t>(8) * config.m_tilde, 0.01f);
  lin.bias.assign(8, 0.0f);

  size_t n_pixels = static_cast<size_t>(width) * height;
  size_t probe = std::min<size_t>(n_pixels, 2048);
  double scale = static_cast<double>(n_pixels) / probe;
  std::vector<std::vector<double>> phis;
  phis.reserve(probe);
  t0 = Clock::now();
  for (size_t p = 0; p < probe; ++p) {
    size_t px = p * (n_pixels / probe);
    phis.push_back(rff_transform(
        pixel_feature(stack, static_cast<int>(px / width), static_cast<int>(px % width)),
        proj, config.gamma));
  }
  bench.rff_seconds = seconds_since(t0) * scale;
  t0 = Clock::now();
  for (const auto& phi : phis) predict_scores(lin, phi);
  bench.classify_seconds = seconds_since(t0) * scale;
  return bench;
}

std::string format_bench(const BenchResult& bench) {
  std::ostringstream os;
  auto line = [&os](const char* tag, const OpReport& r) {
    os << tag << ": total = " << r.total_ops / 1e6 << " MOp (swt " << r.swt_additions / 1e6
       << ", chi " << r.chi_additions / 1e6 << ", abs " << r.abs_ops / 1e6 << ", interp "
       << r.interpolation_ops / 1e6 << ")\n";
  };
  line("cost model (R^2*J^2 second-layer maps)", bench.nominal);
  line("actual configured cost", bench.configured);
  os << "extraction time: " << bench.extract_seconds << " s\n";
  os << "rff time (extrapolated): " << bench.rff_seconds << " s\n";
  os << "classification time (extrapolated): " << bench.classify_seconds << " s\n";
  return os.str();
}

}  // namespace wsg
