#include "wsg/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>

namespace wsg {

namespace {

void check_samples(const std::vector<TrainSample>& samples, int class_count) {
  if (samples.empty()) throw Error("svm: empty sample set");
  for (const auto& s : samples)
    if (s.label < 0 || s.label >= class_count)
      throw Error("svm: class id out of range");
}

// One SGD epoch over the given order; t is the running step counter shared
// across the K binary problems.
void sgd_epoch(LinearModel& model, const std::vector<TrainSample>& samples,
               const std::vector<size_t>& order, double lambda, double t0,
               uint64_t& t) {
  const int K = model.class_count;
  const int m = model.feature_dim;
  for (size_t idx : order) {
    const TrainSample& s = samples[idx];
    ++t;
    double eta = 1.0 / (lambda * (static_cast<double>(t) + t0));
    double shrink = 1.0 - eta * lambda;
    for (int k = 0; k < K; ++k) {
      float* w = &model.weights[static_cast<size_t>(k) * m];
      double y = (s.label == k) ? 1.0 : -1.0;
      double margin = model.bias[k];
      for (int d = 0; d < m; ++d) margin += w[d] * s.features[d];
      margin *= y;
      if (margin < 1.0) {
        double step = eta * y;
        for (int d = 0; d < m; ++d)
          w[d] = static_cast<float>(shrink * w[d] + step * s.features[d]);
        model.bias[k] = static_cast<float>(model.bias[k] + step);
      } else {
        for (int d = 0; d < m; ++d) w[d] = static_cast<float>(shrink * w[d]);
      }
    }
  }
}

// Probes a small grid of t0 values on a subsample, keeping the lowest
// one-epoch objective.
double calibrate_t0(const std::vector<TrainSample>& samples, int class_count,
                    double lambda, uint64_t seed) {
  size_t n = std::max<size_t>(std::min<size_t>(samples.size(), 1000),
                              samples.size() / 100);
  std::vector<size_t> pick(samples.size());
  std::iota(pick.begin(), pick.end(), 0);
  std::mt19937_64 rng(seed ^ 0x746f63616cull);
  std::shuffle(pick.begin(), pick.end(), rng);
  pick.resize(n);
  std::vector<TrainSample> sub;
  sub.reserve(n);
  for (size_t idx : pick) sub.push_back(samples[idx]);

  const int m = static_cast<int>(sub[0].features.size());
  std::vector<size_t> order(sub.size());
  std::iota(order.begin(), order.end(), 0);

  double best_t0 = 1.0 / lambda;
  double best_obj = std::numeric_limits<double>::infinity();
  for (double eta0 :
       {30.0, 10.0, 3.0, 1.0, 0.3, 0.1, 0.03, 0.01, 1e-3, 1e-4}) {
    double t0 = 1.0 / (lambda * eta0);
    LinearModel trial;
    trial.class_count = class_count;
    trial.feature_dim = m;
    trial.weights.assign(static_cast<size_t>(class_count) * m, 0.0f);
    trial.bias.assign(class_count, 0.0f);
    uint64_t t = 0;
    sgd_epoch(trial, sub, order, lambda, t0, t);
    double obj = hinge_objective(trial, sub, lambda);
    if (std::getenv("WSG_DEBUG_CAL"))
      std::fprintf(stderr, "eta0=%g obj=%g\n", eta0, obj);
    if (std::isfinite(obj) && obj < best_obj) {
      best_obj = obj;
      best_t0 = t0;
    }
  }
  return best_t0;
}

}  // namespace

LinearModel svm_train(const std::vector<TrainSample>& samples, int class_count,
                      const TrainConfig& config) {
  check_samples(samples, class_count);
  if (!(config.lambda > 0)) throw Error("svm: lambda must be positive");
  if (config.epochs < 1) throw Error("svm: epochs must be >= 1");
  const int m = static_cast<int>(samples[0].features.size());
  for (const auto& s : samples)
    if (static_cast<int>(s.features.size()) != m)
      throw Error("svm: inconsistent feature dimensions");

  double t0 = config.t0 > 0 ? config.t0
                            : calibrate_t0(samples, class_count, config.lambda,
                                           config.seed);

  LinearModel model;
  model.class_count = class_count;
  model.feature_dim = m;
  model.weights.assign(static_cast<size_t>(class_count) * m, 0.0f);
  model.bias.assign(class_count, 0.0f);

  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  uint64_t t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    sgd_epoch(model, samples, order, config.lambda, t0, t);
  }
  return model;
}

std::vector<double> predict_scores(const LinearModel& model,
                                   const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != model.feature_dim)
    throw Error("predict_scores: dimension mismatch");
  std::vector<double> scores(model.class_count);
  for (int k = 0; k < model.class_count; ++k) {
    const float* w = &model.weights[static_cast<size_t>(k) * model.feature_dim];
    double acc = model.bias[k];
    for (int d = 0; d < model.feature_dim; ++d) acc += w[d] * phi[d];
    scores[k] = acc;
  }
  return scores;
}

int argmax_class(const std::vector<double>& scores) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(scores.size()); ++k)
    if (scores[k] > scores[best]) best = k;
  return best;
}

int predict_class(const LinearModel& model, const std::vector<double>& phi) {
  return argmax_class(predict_scores(model, phi));
}

double hinge_objective(const LinearModel& model,
                       const std::vector<TrainSample>& samples, double lambda) {
  check_samples(samples, model.class_count);
  const int K = model.class_count;
  const int m = model.feature_dim;
  double loss = 0;
  for (const auto& s : samples) {
    for (int k = 0; k < K; ++k) {
      const float* w = &model.weights[static_cast<size_t>(k) * m];
      double y = (s.label == k) ? 1.0 : -1.0;
      double score = model.bias[k];
      for (int d = 0; d < m; ++d) score += w[d] * s.features[d];
      loss += std::max(0.0, 1.0 - y * score);
    }
  }
  loss /= static_cast<double>(samples.size()) * K;
  double reg = 0;
  for (float w : model.weights) reg += static_cast<double>(w) * w;
  return loss + 0.5 * lambda * reg;
}

}  // namespace wsg
