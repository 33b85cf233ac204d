#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lingua/error.hpp"
#include "lingua/metrics.hpp"

using namespace lingua;

namespace {

std::vector<Label> labels_of(std::initializer_list<int> bits) {
  std::vector<Label> y;
  for (int b : bits) y.push_back(b ? Label::Positive : Label::Negative);
  return y;
}

std::vector<Label> repeated(std::size_t pos, std::size_t neg) {
  std::vector<Label> y(pos, Label::Positive);
  y.insert(y.end(), neg, Label::Negative);
  return y;
}

double f1(double tp, double fp, double fn) {
  if (tp == 0.0) return 0.0;
  const double p = tp / (tp + fp);
  const double r = tp / (tp + fn);
  return 2.0 * p * r / (p + r);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("AUC examples") {
  const auto y = labels_of({1, 1, 0, 0});
  CHECK(auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, y) == doctest::Approx(100.0));
  CHECK(auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, y) == doctest::Approx(50.0));
  CHECK(auc(std::vector<double>{0.9, 0.1, 0.5, 0.05}, y) == doctest::Approx(75.0));
  CHECK(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, y) == doctest::Approx(0.0));
  CHECK_THROWS_AS(auc(std::vector<double>{1.0, 2.0}, labels_of({1, 1})), ValidationError);
}

TEST_CASE("AUC agrees with pair counting and the ROC area") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> s(n);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(8));  // plenty of ties
      y[i] = i == 0 ? Label::Positive : i == 1 ? Label::Negative
                                               : (rng.below(2) ? Label::Positive : Label::Negative);
    }
    const double a = auc(s, y);
    CHECK(a == doctest::Approx(fixtures::brute_force_auc(s, y)).epsilon(1e-12));
    const auto roc = roc_points(s, y);
    CHECK(std::abs(100.0 * trapezoid_area(roc) - a) < 1e-9);
  }
}

TEST_CASE("AUC ignores strictly increasing transforms") {
  Rng rng(4);
  std::vector<double> s(50);
  std::vector<Label> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    s[i] = rng.normal();
    y[i] = i % 3 == 0 ? Label::Positive : Label::Negative;
  }
  std::vector<double> t;
  for (double v : s) t.push_back(std::exp(2.0 * v) - 3.0);
  CHECK(auc(s, y) == auc(t, y));
}

TEST_CASE("ROC curve shape") {
  const auto y = labels_of({1, 0, 1, 0, 1});
  const auto roc = roc_points(std::vector<double>{0.9, 0.7, 0.7, 0.3, 0.1}, y);
  REQUIRE(roc.size() >= 2);
  CHECK(roc.front() == RocPoint{0.0, 0.0});
  CHECK(roc.back() == RocPoint{1.0, 1.0});
  for (std::size_t i = 1; i < roc.size(); ++i) {
    CHECK(roc[i].fpr >= roc[i - 1].fpr);
    CHECK(roc[i].tpr >= roc[i - 1].tpr);
  }
  // thresholds 0.9, 0.7, 0.3, 0.1
  CHECK(roc.size() == 5);
}

TEST_CASE("F-score averages by hand") {
  ConfusionMatrix cm{8, 2, 6, 4};  // 12 positives, 8 negatives
  const double f_pos = f1(8, 2, 4);
  const double f_neg = f1(6, 4, 2);
  CHECK(f_score(cm, FAverage::Macro) == doctest::Approx(100.0 * (f_pos + f_neg) / 2.0));
  CHECK(f_score(cm, FAverage::Weighted) == doctest::Approx(100.0 * (12.0 * f_pos + 8.0 * f_neg) / 20.0));
  CHECK(f_score(cm, FAverage::Micro) == doctest::Approx(100.0 * 14.0 / 20.0));
}

TEST_CASE("F-score is symmetric in the class roles") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    ConfusionMatrix cm{rng.below(20), rng.below(20), rng.below(20), rng.below(20)};
    if (cm.total() == 0) continue;
    const ConfusionMatrix swapped{cm.tn, cm.fn, cm.tp, cm.fp};
    for (FAverage a : {FAverage::Weighted, FAverage::Macro, FAverage::Micro}) {
      CHECK(f_score(cm, a) == doctest::Approx(f_score(swapped, a)));
    }
  }
}

TEST_CASE("confusion matrix counts") {
  ConfusionMatrix cm;
  cm.add(Label::Positive, Label::Positive);
  cm.add(Label::Positive, Label::Negative);
  cm.add(Label::Negative, Label::Negative);
  cm.add(Label::Negative, Label::Positive);
  cm.add(Label::Negative, Label::Positive);
  CHECK(cm == ConfusionMatrix{1, 1, 1, 2});
}

TEST_CASE("majority baseline") {
  CHECK(majority_baseline(repeated(5, 5)) == doctest::Approx(100.0 / 3.0));
  CHECK(majority_baseline(repeated(190, 183)) == doctest::Approx(34.38).epsilon(5e-4));
  // by hand: F of the majority class weighted by its share
  const double share = 190.0 / 373.0;
  CHECK(majority_baseline(repeated(190, 183)) == doctest::Approx(100.0 * share * 2.0 * share / (share + 1.0)));
  CHECK(majority_baseline(repeated(3, 0)) == doctest::Approx(100.0));
  CHECK(majority_baseline(repeated(2, 6), FAverage::Micro) == doctest::Approx(75.0));
  CHECK_THROWS(majority_baseline(std::vector<Label>{}));
}

TEST_CASE("averaging names") {
  CHECK(parse_f_average("macro") == FAverage::Macro);
  CHECK(parse_f_average("weighted") == FAverage::Weighted);
  CHECK_FALSE(parse_f_average("harmonic").has_value());
  CHECK(f_average_name(FAverage::Micro) == "micro");
}

}
