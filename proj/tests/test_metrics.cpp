#include <doctest.h>

#include <cmath>

#include "wsg/metrics.hpp"

using namespace wsg;

namespace {

LabelMap make_map(int w, int h, std::vector<uint8_t> labels) {
  LabelMap lm;
  lm.width = w;
  lm.height = h;
  lm.labels = std::move(labels);
  return lm;
}

size_t included_count(const std::vector<uint8_t>& mask) {
  size_t n = 0;
  for (uint8_t m : mask) n += m;
  return n;
}

// Brute-force oracle for the exclusion rule.
bool excluded_brute(const LabelMap& truth, int i, int j, double radius) {
  uint8_t own = truth.at(i, j);
  if (own == kVoidLabel) return false;
  for (int a = 0; a < truth.height; ++a)
    for (int b = 0; b < truth.width; ++b) {
      uint8_t other = truth.at(a, b);
      if (other == kVoidLabel || other == own) continue;
      double d = std::hypot(a - i, b - j);
      if (d <= radius) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("boundary exclusion mask") {
  SUBCASE("uniform map excludes nothing") {
    LabelMap lm = make_map(6, 6, std::vector<uint8_t>(36, 2));
    auto mask = boundary_exclusion_mask(lm, 3);
    CHECK(included_count(mask) == 36);
  }
  SUBCASE("radius 0 excludes nothing") {
    std::vector<uint8_t> labels(64);
    for (int k = 0; k < 64; ++k) labels[k] = (k % 8 < 4) ? 0 : 1;
    LabelMap lm = make_map(8, 8, labels);
    CHECK(included_count(boundary_exclusion_mask(lm, 0)) == 64);
  }
  SUBCASE("vertical edge with radius 3 matches the brute-force disk rule") {
    std::vector<uint8_t> labels(12 * 10);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 12; ++j) labels[i * 12 + j] = j < 6 ? 0 : 1;
    LabelMap lm = make_map(12, 10, labels);
    auto mask = boundary_exclusion_mask(lm, 3);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 12; ++j) {
        bool included = mask[i * 12 + j];
        CHECK(included == !excluded_brute(lm, i, j, 3));
        // columns 3..8 are within distance 3 of the edge between cols 5 and 6
        CHECK(included == (j < 3 || j > 8));
      }
  }
  SUBCASE("euclidean, not chebyshev: corner-distance neighbors at radius 1") {
    // single differing pixel at the center of a 5x5 field
    std::vector<uint8_t> labels(25, 0);
    labels[2 * 5 + 2] = 1;
    LabelMap lm = make_map(5, 5, labels);
    auto mask = boundary_exclusion_mask(lm, 1);
    CHECK_FALSE(mask[2 * 5 + 2]);  // the odd pixel itself
    CHECK_FALSE(mask[1 * 5 + 2]);  // axial neighbors at distance 1
    CHECK_FALSE(mask[2 * 5 + 1]);
    CHECK(mask[1 * 5 + 1]);        // diagonal neighbor at distance sqrt(2)
  }
  SUBCASE("void labels are ignored on both sides") {
    std::vector<uint8_t> labels(25, 0);
    labels[12] = 255;
    LabelMap lm = make_map(5, 5, labels);
    auto mask = boundary_exclusion_mask(lm, 2);
    CHECK(included_count(mask) == 25);  // void creates no boundary
  }
  SUBCASE("growing the radius never adds evaluated pixels") {
    std::vector<uint8_t> labels(16 * 16);
    for (int k = 0; k < 256; ++k) labels[k] = static_cast<uint8_t>((k / 7) % 3);
    LabelMap lm = make_map(16, 16, labels);
    size_t prev = 256;
    for (double radius : {0.0, 1.0, 2.0, 3.0, 5.0}) {
      size_t now = included_count(boundary_exclusion_mask(lm, radius));
      CHECK(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("confusion matrix") {
  SUBCASE("perfect prediction is diagonal") {
    LabelMap truth = make_map(4, 1, {0, 1, 2, 1});
    ConfusionMatrix cm = confusion_matrix(truth, truth, {}, 3);
    CHECK(cm.total() == 4);
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(1, 1) == 2);
    CHECK(cm.at(2, 2) == 1);
    CHECK(cm.at(0, 1) == 0);
  }
  SUBCASE("hand case with 3 known errors") {
    LabelMap truth = make_map(4, 4, {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 255, 1, 0, 0});
    LabelMap pred = make_map(4, 4, {0, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0});
    ConfusionMatrix cm = confusion_matrix(pred, truth, {}, 2);
    CHECK(cm.total() == 15);  // one void pixel skipped
    CHECK(cm.at(0, 0) == 7);
    CHECK(cm.at(0, 1) == 1);
    CHECK(cm.at(1, 0) == 2);
    CHECK(cm.at(1, 1) == 5);
  }
  SUBCASE("all-void truth gives the zero matrix") {
    LabelMap truth = make_map(3, 1, {255, 255, 255});
    LabelMap pred = make_map(3, 1, {0, 1, 0});
    CHECK(confusion_matrix(pred, truth, {}, 2).total() == 0);
  }
  SUBCASE("mask filters pixels") {
    LabelMap truth = make_map(3, 1, {0, 1, 1});
    LabelMap pred = make_map(3, 1, {0, 0, 1});
    ConfusionMatrix cm = confusion_matrix(pred, truth, {1, 0, 1}, 2);
    CHECK(cm.total() == 2);
    CHECK(cm.at(1, 0) == 0);
  }
  SUBCASE("dimension mismatch rejected") {
    LabelMap a = make_map(2, 1, {0, 0});
    LabelMap b = make_map(1, 2, {0, 0});
    CHECK_THROWS_AS(confusion_matrix(a, b, {}, 1), Error);
  }
}

TEST_CASE("pixel accuracy") {
  SUBCASE("perfect is 1, all wrong is 0") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 3;
    double acc = 0;
    REQUIRE(pixel_accuracy(cm, &acc));
    CHECK(acc == 1.0);
    ConfusionMatrix wrong(2);
    wrong.at(0, 1) = 4;
    wrong.at(1, 0) = 4;
    REQUIRE(pixel_accuracy(wrong, &acc));
    CHECK(acc == 0.0);
  }
  SUBCASE("hand value") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 7;
    cm.at(0, 1) = 1;
    cm.at(1, 0) = 2;
    cm.at(1, 1) = 5;
    double acc = 0;
    REQUIRE(pixel_accuracy(cm, &acc));
    CHECK(acc == doctest::Approx(12.0 / 15.0));
  }
  SUBCASE("empty matrix reports no data") {
    ConfusionMatrix cm(3);
    double acc = 0;
    CHECK_FALSE(pixel_accuracy(cm, &acc));
  }
}

TEST_CASE("class scores") {
  SUBCASE("perfect prediction scores 1 everywhere") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 4;
    cm.at(1, 1) = 2;
    cm.at(2, 2) = 9;
    ScoreSummary s = class_scores(cm);
    for (const auto& c : s.per_class) {
      CHECK(c.precision == 1.0);
      CHECK(c.recall == 1.0);
      CHECK(c.f1 == 1.0);
    }
    CHECK(s.mean_f1 == 1.0);
  }
  SUBCASE("hand 2-class case") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 7;
    cm.at(0, 1) = 1;
    cm.at(1, 0) = 2;
    cm.at(1, 1) = 5;
    ScoreSummary s = class_scores(cm);
    CHECK(s.per_class[0].precision == doctest::Approx(7.0 / 9.0));
    CHECK(s.per_class[0].recall == doctest::Approx(7.0 / 8.0));
    CHECK(s.per_class[1].precision == doctest::Approx(5.0 / 6.0));
    CHECK(s.per_class[1].recall == doctest::Approx(5.0 / 7.0));
    double f10 = 2 * (7.0 / 9.0) * (7.0 / 8.0) / (7.0 / 9.0 + 7.0 / 8.0);
    CHECK(s.per_class[0].f1 == doctest::Approx(f10));
    CHECK(s.mean_precision == doctest::Approx((7.0 / 9.0 + 5.0 / 6.0) / 2));
    CHECK(s.mean_recall == doctest::Approx((7.0 / 8.0 + 5.0 / 7.0) / 2));
  }
  SUBCASE("classes absent everywhere are excluded from means") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 4;
    cm.at(1, 1) = 4;
    ScoreSummary s = class_scores(cm);
    CHECK_FALSE(s.per_class[2].present);
    CHECK(s.mean_f1 == 1.0);
  }
  SUBCASE("f1 is 0 for an occurring class never predicted correctly") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 4;
    cm.at(1, 0) = 3;
    ScoreSummary s = class_scores(cm);
    CHECK(s.per_class[1].present);
    CHECK(s.per_class[1].f1 == 0.0);
  }
}

TEST_CASE("consistent class permutation permutes scores and preserves means") {
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 5;
  cm.at(0, 1) = 2;
  cm.at(1, 1) = 7;
  cm.at(1, 2) = 1;
  cm.at(2, 0) = 3;
  cm.at(2, 2) = 4;
  // permutation p: 0->2, 1->0, 2->1
  int p[3] = {2, 0, 1};
  ConfusionMatrix pm(3);
  for (int t = 0; t < 3; ++t)
    for (int q = 0; q < 3; ++q) pm.at(p[t], p[q]) = cm.at(t, q);

  ScoreSummary a = class_scores(cm), b = class_scores(pm);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.per_class[k].precision == doctest::Approx(b.per_class[p[k]].precision));
    CHECK(a.per_class[k].recall == doctest::Approx(b.per_class[p[k]].recall));
    CHECK(a.per_class[k].f1 == doctest::Approx(b.per_class[p[k]].f1));
  }
  CHECK(a.mean_f1 == doctest::Approx(b.mean_f1));
  CHECK(a.mean_precision == doctest::Approx(b.mean_precision));
  double acc_a = 0, acc_b = 0;
  pixel_accuracy(cm, &acc_a);
  pixel_accuracy(pm, &acc_b);
  CHECK(acc_a == doctest::Approx(acc_b));
}

TEST_CASE("report formatting carries the metric names") {
  ConfusionMatrix cm(2);
  cm.at(0, 0) = 3;
  cm.at(1, 1) = 1;
  std::string report = format_report(cm, {"roads", "trees"});
  CHECK(report.find("pixel_accuracy = 1") != std::string::npos);
  CHECK(report.find("mean_precision") != std::string::npos);
  CHECK(report.find("mean_recall") != std::string::npos);
  CHECK(report.find("roads") != std::string::npos);
  CHECK(report.find("trees") != std::string::npos);
}
