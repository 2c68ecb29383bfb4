#pragma once

#include <cstdint>
#include <vector>

#include "wsg/plane.hpp"

namespace wsg {

struct LinearModel {
  int class_count = 0;
  int feature_dim = 0;
  std::vector<float> weights;  // class_count rows of feature_dim, row-major
  std::vector<float> bias;     // class_count
};

struct TrainSample {
  std::vector<double> features;
  int label = 0;
};

struct TrainConfig {
  double lambda = 1e-5;
  int epochs = 5;
  uint64_t seed = 0;
  double t0 = 0;  // <= 0: auto-calibrated on a subsample
};

// One-vs-rest linear SVM, hinge loss + l2, sequential SGD with learning rate
// eta_t = 1/(lambda*(t + t0)); bias unregularized. Deterministic for fixed
// (samples, config).
LinearModel svm_train(const std::vector<TrainSample>& samples, int class_count,
                      const TrainConfig& config);

// y = W*phi + v
std::vector<double> predict_scores(const LinearModel& model,
                                   const std::vector<double>& phi);

// argmax of scores; ties break toward the lowest class index.
int predict_class(const LinearModel& model, const std::vector<double>& phi);
int argmax_class(const std::vector<double>& scores);

// Mean over classes and samples of hinge(1 - y*(w.x + v)) plus
// (lambda/2) * sum_k ||w_k||^2.
double hinge_objective(const LinearModel& model,
                       const std::vector<TrainSample>& samples, double lambda);

}  // namespace wsg
