#include "wsg/metrics.hpp"

#include <cmath>
#include <sstream>

namespace wsg {

uint64_t ConfusionMatrix::total() const {
  uint64_t t = 0;
  for (uint64_t c : counts) t += c;
  return t;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.class_count != class_count) throw Error("confusion matrix class count mismatch");
  for (size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
}

std::vector<uint8_t> boundary_exclusion_mask(const LabelMap& truth, double radius) {
  if (radius < 0) throw Error("boundary radius must be >= 0");
  std::vector<uint8_t> mask(truth.labels.size(), 1);
  int r = static_cast<int>(std::floor(radius));
  if (r == 0 && radius < 1.0) return mask;

  // Offsets within the Euclidean disk, precomputed once.
  std::vector<std::pair<int, int>> disk;
  for (int di = -r; di <= r; ++di)
    for (int dj = -r; dj <= r; ++dj)
      if (di * di + dj * dj <= radius * radius && (di || dj))
        disk.emplace_back(di, dj);

  for (int i = 0; i < truth.height; ++i) {
    for (int j = 0; j < truth.width; ++j) {
      uint8_t own = truth.at(i, j);
      if (own == kVoidLabel) continue;
      for (auto [di, dj] : disk) {
        int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= truth.height || jj >= truth.width) continue;
        uint8_t other = truth.at(ii, jj);
        if (other != kVoidLabel && other != own) {
          mask[static_cast<size_t>(i) * truth.width + j] = 0;
          break;
        }
      }
    }
  }
  return mask;
}

ConfusionMatrix confusion_matrix(const LabelMap& pred, const LabelMap& truth,
                                 const std::vector<uint8_t>& mask, int class_count) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw Error("confusion_matrix: dimension mismatch");
  if (!mask.empty() && mask.size() != truth.labels.size())
    throw Error("confusion_matrix: mask dimension mismatch");
  ConfusionMatrix cm(class_count);
  for (size_t p = 0; p < truth.labels.size(); ++p) {
    uint8_t t = truth.labels[p];
    if (t == kVoidLabel) continue;
    if (!mask.empty() && !mask[p]) continue;
    uint8_t q = pred.labels[p];
    if (t >= class_count || q >= class_count)
      throw Error("confusion_matrix: label out of range");
    cm.at(t, q)++;
  }
  return cm;
}

bool pixel_accuracy(const ConfusionMatrix& cm, double* accuracy) {
  uint64_t total = cm.total();
  if (total == 0) return false;
  uint64_t diag = 0;
  for (int k = 0; k < cm.class_count; ++k) diag += cm.at(k, k);
  *accuracy = static_cast<double>(diag) / total;
  return true;
}

ScoreSummary class_scores(const ConfusionMatrix& cm) {
  if (cm.class_count < 1) throw Error("class_scores: empty matrix");
  ScoreSummary out;
  out.per_class.resize(cm.class_count);
  int present = 0;
  for (int k = 0; k < cm.class_count; ++k) {
    uint64_t row = 0, col = 0;
    for (int q = 0; q < cm.class_count; ++q) {
      row += cm.at(k, q);
      col += cm.at(q, k);
    }
    ClassScore& s = out.per_class[k];
    s.present = (row + col) > 0;
    if (!s.present) continue;
    ++present;
    uint64_t tp = cm.at(k, k);
    s.precision = col ? static_cast<double>(tp) / col : 0.0;
    s.recall = row ? static_cast<double>(tp) / row : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    out.mean_precision += s.precision;
    out.mean_recall += s.recall;
    out.mean_f1 += s.f1;
  }
  if (present) {
    out.mean_precision /= present;
    out.mean_recall /= present;
    out.mean_f1 /= present;
  }
  return out;
}

std::string format_report(const ConfusionMatrix& cm,
                          const std::vector<std::string>& class_names) {
  std::ostringstream os;
  double acc = 0;
  bool have = pixel_accuracy(cm, &acc);
  ScoreSummary s = class_scores(cm);
  os << "evaluated_pixels = " << cm.total() << "\n";
  if (have)
    os << "pixel_accuracy = " << acc << "\n";
  else
    os << "pixel_accuracy = no data\n";
  os << "mean_precision = " << s.mean_precision << "\n";
  os << "mean_recall = " << s.mean_recall << "\n";
  os << "mean_f1 = " << s.mean_f1 << "\n";
  os << "class\tprecision\trecall\tf1\n";
  for (int k = 0; k < cm.class_count; ++k) {
    std::string name = k < static_cast<int>(class_names.size())
                           ? class_names[k]
                           : "class" + std::to_string(k);
    const ClassScore& c = s.per_class[k];
    if (c.present)
      os << name << "\t" << c.precision << "\t" << c.recall << "\t" << c.f1 << "\n";
    else
      os << name << "\tabsent\tabsent\tabsent\n";
  }
  return os.str();
}

}  // namespace wsg
