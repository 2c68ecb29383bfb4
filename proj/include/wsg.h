/* C API for the wavelet-scattering segmentation engine.
 *
 * All functions return wsg_status; WSG_OK is 0. On failure a thread-local
 * message is available via wsg_last_error(). Handles are opaque and must be
 * released with their matching *_close/_free function.
 */
#ifndef WSG_H
#define WSG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsg_status {
  WSG_OK = 0,
  WSG_ERR_INVALID_ARGUMENT = 1,
  WSG_ERR_IO = 2,
  WSG_ERR_BAD_MODEL = 3,
  WSG_ERR_INTERNAL = 4
} wsg_status;

/* Message for the most recent failure on the calling thread. */
const char* wsg_last_error(void);

const char* wsg_version(void);

typedef struct wsg_model wsg_model;

typedef struct wsg_run_config {
  int levels;              /* wavelet scales per layer, default 4 */
  int depth;               /* tree depth, 1 or 2 */
  int pool_factor;         /* default 2 */
  int scale_rule;          /* 0 = non-decreasing second-layer scales, 1 = all */
  int image_scales[8];     /* strictly increasing powers of 2 */
  int n_image_scales;
  int color_mode;          /* 0 = raw channels, 1 = RGB->YUV */
  double gamma;
  double lambda;
  int m_tilde;
  double sample_fraction;
  int epochs;
  uint64_t seed;
  int threads;
} wsg_run_config;

/* Fills in the architecture defaults (J=4, D=2, 1 scale, YUV, m~=5000,
 * 2% sampling, 5 epochs). */
void wsg_run_config_init(wsg_run_config* config);

typedef struct wsg_train_stats {
  int feature_dim;
  uint64_t sample_count;
  double final_objective;
  uint64_t model_bytes;
} wsg_train_stats;

/* Train on a manifest and write the model file; stats may be NULL. */
wsg_status wsg_train(const char* manifest_path, const wsg_run_config* config,
                     const char* out_model_path, wsg_train_stats* stats);

wsg_status wsg_model_open(const char* path, wsg_model** out);
void wsg_model_close(wsg_model* model);

typedef struct wsg_model_info {
  int levels;
  int depth;
  int class_count;
  int m_tilde;
  int channel_count;
  double gamma;
  uint64_t seed;
} wsg_model_info;

wsg_status wsg_model_get_info(const wsg_model* model, wsg_model_info* out);

/* Predict labels for one image; score_dir may be NULL (no score planes). */
wsg_status wsg_predict(const wsg_model* model, const char* image_path,
                       const char* out_label_path, const char* score_dir,
                       int threads);

/* Evaluate over a manifest; writes the text report to report_path (may be
 * NULL) and the summary metrics to the out-params (each may be NULL). */
wsg_status wsg_eval(const wsg_model* model, const char* manifest_path,
                    double boundary_radius, int threads, const char* report_path,
                    double* pixel_accuracy, double* mean_f1);

typedef struct wsg_tune_result {
  double best_gamma;
  double best_lambda;
} wsg_tune_result;

wsg_status wsg_tune(const char* manifest_path, const wsg_run_config* config,
                    const double* gamma_grid, int n_gamma,
                    const double* lambda_grid, int n_lambda,
                    double holdout_fraction, const char* table_path,
                    wsg_tune_result* out);

typedef struct wsg_op_report {
  double swt_additions;
  double chi_additions;
  double abs_ops;
  double interpolation_ops;
  double total_ops;
} wsg_op_report;

/* Feature-extraction cost model; `nominal` is the closed-form cost model,
 * `configured` re-evaluates it with the configured path counts. Either
 * out-param may be NULL. report_path (may be NULL) additionally receives the
 * full bench report with stage timings. */
wsg_status wsg_bench(int width, int height, int channels,
                     const wsg_run_config* config, wsg_op_report* nominal,
                     wsg_op_report* configured, const char* report_path);

/* Generate a deterministic synthetic texture dataset and its manifest. */
wsg_status wsg_synth(int n_images, int classes, int width, int height,
                     uint64_t seed, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* WSG_H */
