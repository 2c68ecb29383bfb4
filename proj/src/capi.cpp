#include "wsg.h"

#include <cstring>
#include <fstream>
#include <string>

#include "wsg/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

wsg_status fail(wsg_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

wsg_status classify_error(const std::exception& e) {
  std::string msg = e.what();
  if (msg.find("magic") != std::string::npos ||
      msg.find("checksum") != std::string::npos ||
      msg.find("model") != std::string::npos)
    return fail(WSG_ERR_BAD_MODEL, msg);
  if (msg.find("cannot open") != std::string::npos ||
      msg.find("missing") != std::string::npos ||
      msg.find("PNG") != std::string::npos ||
      msg.find("writ") != std::string::npos)
    return fail(WSG_ERR_IO, msg);
  return fail(WSG_ERR_INVALID_ARGUMENT, msg);
}

wsg::RunConfig to_cpp(const wsg_run_config& c) {
  wsg::RunConfig out;
  out.extractor.levels = c.levels;
  out.extractor.depth = c.depth;
  out.extractor.pool_factor = c.pool_factor;
  out.extractor.scale_rule = static_cast<wsg::ScaleRule>(c.scale_rule);
  out.extractor.image_scales.assign(c.image_scales, c.image_scales + c.n_image_scales);
  out.color_mode = static_cast<wsg::ColorMode>(c.color_mode);
  out.gamma = c.gamma;
  out.lambda = c.lambda;
  out.m_tilde = c.m_tilde;
  out.sample_fraction = c.sample_fraction;
  out.epochs = c.epochs;
  out.seed = c.seed;
  out.threads = c.threads;
  return out;
}

void write_text(const char* path, const std::string& text) {
  if (!path) return;
  std::ofstream out(path);
  if (!out) throw wsg::Error(std::string("cannot open report file for writing: ") + path);
  out << text;
}

}  // namespace

extern "C" {

struct wsg_model {
  wsg::ModelBundle bundle;
};

const char* wsg_last_error(void) { return g_last_error.c_str(); }

const char* wsg_version(void) { return "1.0.0"; }

void wsg_run_config_init(wsg_run_config* config) {
  std::memset(config, 0, sizeof(*config));
  config->levels = 4;
  config->depth = 2;
  config->pool_factor = 2;
  config->scale_rule = 0;
  config->image_scales[0] = 1;
  config->n_image_scales = 1;
  config->color_mode = 1;
  config->gamma = 10.0;
  config->lambda = 1e-5;
  config->m_tilde = 5000;
  config->sample_fraction = 0.02;
  config->epochs = 5;
  config->seed = 1;
  config->threads = 1;
}

wsg_status wsg_train(const char* manifest_path, const wsg_run_config* config,
                     const char* out_model_path, wsg_train_stats* stats) {
  if (!manifest_path || !config || !out_model_path)
    return fail(WSG_ERR_INVALID_ARGUMENT, "null argument");
  try {
    wsg::DatasetManifest manifest = wsg::load_manifest(manifest_path);
    wsg::TrainStats ts = wsg::run_train(manifest, to_cpp(*config), out_model_path);
    if (stats) {
      stats->feature_dim = ts.feature_dim;
      stats->sample_count = ts.sample_count;
      stats->final_objective = ts.final_objective;
      stats->model_bytes = ts.model_bytes;
    }
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

wsg_status wsg_model_open(const char* path, wsg_model** out) {
  if (!path || !out) return fail(WSG_ERR_INVALID_ARGUMENT, "null argument");
  try {
    auto* handle = new wsg_model{wsg::deserialize_model(path)};
    *out = handle;
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

void wsg_model_close(wsg_model* model) { delete model; }

wsg_status wsg_model_get_info(const wsg_model* model, wsg_model_info* out) {
  if (!model || !out) return fail(WSG_ERR_INVALID_ARGUMENT, "null argument");
  out->levels = model->bundle.extractor.levels;
  out->depth = model->bundle.extractor.depth;
  out->class_count = model->bundle.linear.class_count;
  out->m_tilde = model->bundle.rff.m_tilde;
  out->channel_count = model->bundle.channel_count;
  out->gamma = model->bundle.rff.gamma;
  out->seed = model->bundle.rff.seed;
  return WSG_OK;
}

wsg_status wsg_predict(const wsg_model* model, const char* image_path,
                       const char* out_label_path, const char* score_dir,
                       int threads) {
  if (!model || !image_path || !out_label_path)
    return fail(WSG_ERR_INVALID_ARGUMENT, "null argument");
  try {
    wsg::Image image = wsg::load_image(image_path);
    std::vector<wsg::Plane> scores;
    wsg::LabelMap labels = wsg::predict_labels(model->bundle, image, threads,
                                               score_dir ? &scores : nullptr);
    wsg::save_labels(out_label_path, labels);
    if (score_dir) wsg::write_score_planes(score_dir, scores);
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

wsg_status wsg_eval(const wsg_model* model, const char* manifest_path,
                    double boundary_radius, int threads, const char* report_path,
                    double* pixel_accuracy, double* mean_f1) {
  if (!model || !manifest_path) return fail(WSG_ERR_INVALID_ARGUMENT, "null argument");
  try {
    wsg::DatasetManifest manifest = wsg::load_manifest(manifest_path);
    wsg::EvalResult ev =
        wsg::run_eval(model->bundle, manifest, boundary_radius, threads);
    write_text(report_path, ev.report);
    if (pixel_accuracy) {
      double acc = 0;
      wsg::pixel_accuracy(ev.cm, &acc);
      *pixel_accuracy = acc;
    }
    if (mean_f1) *mean_f1 = wsg::class_scores(ev.cm).mean_f1;
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

wsg_status wsg_tune(const char* manifest_path, const wsg_run_config* config,
                    const double* gamma_grid, int n_gamma,
                    const double* lambda_grid, int n_lambda,
                    double holdout_fraction, const char* table_path,
                    wsg_tune_result* out) {
  if (!manifest_path || !config || !gamma_grid || !lambda_grid || n_gamma < 1 ||
      n_lambda < 1)
    return fail(WSG_ERR_INVALID_ARGUMENT, "null or empty grid argument");
  try {
    wsg::DatasetManifest manifest = wsg::load_manifest(manifest_path);
    wsg::TuneResult result = wsg::run_tune(
        manifest, to_cpp(*config), std::vector<double>(gamma_grid, gamma_grid + n_gamma),
        std::vector<double>(lambda_grid, lambda_grid + n_lambda), holdout_fraction);
    if (table_path) {
      std::string table = "gamma\tlambda\tpixel_accuracy\n";
      for (const auto& p : result.table)
        table += std::to_string(p.gamma) + "\t" + std::to_string(p.lambda) + "\t" +
                 std::to_string(p.accuracy) + "\n";
      write_text(table_path, table);
    }
    if (out) {
      out->best_gamma = result.best_gamma;
      out->best_lambda = result.best_lambda;
    }
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

wsg_status wsg_bench(int width, int height, int channels,
                     const wsg_run_config* config, wsg_op_report* nominal,
                     wsg_op_report* configured, const char* report_path) {
  if (!config) return fail(WSG_ERR_INVALID_ARGUMENT, "null config");
  try {
    wsg::BenchResult bench = wsg::run_bench(width, height, channels, to_cpp(*config));
    auto copy = [](const wsg::OpReport& r, wsg_op_report* out) {
      if (!out) return;
      out->swt_additions = r.swt_additions;
      out->chi_additions = r.chi_additions;
      out->abs_ops = r.abs_ops;
      out->interpolation_ops = r.interpolation_ops;
      out->total_ops = r.total_ops;
    };
    copy(bench.nominal, nominal);
    copy(bench.configured, configured);
    write_text(report_path, wsg::format_bench(bench));
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

wsg_status wsg_synth(int n_images, int classes, int width, int height,
                     uint64_t seed, const char* out_dir) {
  if (!out_dir) return fail(WSG_ERR_INVALID_ARGUMENT, "null output directory");
  try {
    wsg::SynthConfig config{n_images, classes, width, height, seed};
    wsg::synth_texture_dataset(config, out_dir);
    return WSG_OK;
  } catch (const std::exception& e) {
    return classify_error(e);
  }
}

}  // extern "C"
