#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsg/dataset.hpp"

namespace wsg {

// Rows = true class, cols = predicted class.
struct ConfusionMatrix {
  int class_count = 0;
  std::vector<uint64_t> counts;

  explicit ConfusionMatrix(int k = 0) : class_count(k), counts(static_cast<size_t>(k) * k, 0) {}
  uint64_t& at(int t, int p) { return counts[static_cast<size_t>(t) * class_count + p]; }
  uint64_t at(int t, int p) const { return counts[static_cast<size_t>(t) * class_count + p]; }
  uint64_t total() const;
  void merge(const ConfusionMatrix& other);
};

// A pixel is excluded (false) iff a pixel with a different non-void true
// label lies within Euclidean distance <= radius.
std::vector<uint8_t> boundary_exclusion_mask(const LabelMap& truth, double radius);

// Counts over pixels non-void in truth and included by mask (empty mask =
// include all).
ConfusionMatrix confusion_matrix(const LabelMap& pred, const LabelMap& truth,
                                 const std::vector<uint8_t>& mask, int class_count);

// trace / total; returns false (no data) when nothing was evaluated.
bool pixel_accuracy(const ConfusionMatrix& cm, double* accuracy);

struct ClassScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  bool present = false;  // occurs in truth or prediction
};

struct ScoreSummary {
  std::vector<ClassScore> per_class;
  double mean_precision = 0;
  double mean_recall = 0;
  double mean_f1 = 0;
};

// Classes absent from both truth and prediction are excluded from means.
ScoreSummary class_scores(const ConfusionMatrix& cm);

std::string format_report(const ConfusionMatrix& cm,
                          const std::vector<std::string>& class_names);

}  // namespace wsg
