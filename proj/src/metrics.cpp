#include "lingua/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "lingua/error.hpp"

namespace lingua {

namespace {

std::pair<std::size_t, std::size_t> class_counts(std::span<const Label> labels) {
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Positive));
  return {pos, labels.size() - pos};
}

void require_scored_pairs(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw ValidationError("score and label counts differ");
  const auto [pos, neg] = class_counts(labels);
  if (pos == 0 || neg == 0) throw ValidationError("ROC analysis needs both classes");
}

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

void ConfusionMatrix::add(Label predicted, Label actual) {
  if (actual == Label::Positive) {
    (predicted == Label::Positive ? tp : fn)++;
  } else {
    (predicted == Label::Positive ? fp : tn)++;
  }
}

std::optional<FAverage> parse_f_average(std::string_view text) {
  if (text == "weighted") return FAverage::Weighted;
  if (text == "macro") return FAverage::Macro;
  if (text == "micro") return FAverage::Micro;
  return std::nullopt;
}

std::string_view f_average_name(FAverage average) {
  switch (average) {
    case FAverage::Weighted: return "weighted";
    case FAverage::Macro: return "macro";
    case FAverage::Micro: return "micro";
  }
  return "weighted";
}

double f_score(const ConfusionMatrix& cm, FAverage average) {
  const std::size_t n = cm.total();
  if (n == 0) throw ValidationError("F-score of an empty confusion matrix");
  const double f_pos = f1(cm.tp, cm.fp, cm.fn);
  const double f_neg = f1(cm.tn, cm.fn, cm.fp);
  double f = 0.0;
  switch (average) {
    case FAverage::Weighted: {
      const double w_pos = static_cast<double>(cm.tp + cm.fn) / static_cast<double>(n);
      f = w_pos * f_pos + (1.0 - w_pos) * f_neg;
      break;
    }
    case FAverage::Macro: f = 0.5 * (f_pos + f_neg); break;
    case FAverage::Micro:
      // Pooled over both classes, micro precision = micro recall = accuracy.
      f = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(n);
      break;
  }
  return 100.0 * f;
}

double majority_baseline(std::span<const Label> labels, FAverage average) {
  if (labels.empty()) throw ValidationError("majority baseline of an empty label set");
  const auto [pos, neg] = class_counts(labels);
  const Label majority = pos >= neg ? Label::Positive : Label::Negative;
  ConfusionMatrix cm;
  for (Label actual : labels) cm.add(majority, actual);
  return f_score(cm, average);
}

double auc(std::span<const double> scores, std::span<const Label> labels) {
  require_scored_pairs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] == Label::Positive) positive_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const auto [pos, neg] = class_counts(labels);
  const double p = static_cast<double>(pos);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return 100.0 * u / (p * static_cast<double>(neg));
}

std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const Label> labels) {
  require_scored_pairs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const auto [pos, neg] = class_counts(labels);
  std::vector<RocPoint> points{{0.0, 0.0}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == Label::Positive ? tp : fp)++;
      ++j;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                      static_cast<double>(tp) / static_cast<double>(pos)});
    i = j;
  }
  return points;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * 0.5 * (points[i].tpr + points[i - 1].tpr);
  }
  return area;
}

}  // namespace lingua
