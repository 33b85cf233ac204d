#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lingua/corpus.hpp"

namespace lingua {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  void add(Label predicted, Label actual);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

enum class FAverage { Weighted, Macro, Micro };
std::optional<FAverage> parse_f_average(std::string_view text);
std::string_view f_average_name(FAverage average);

/// Two-class F1 averaged as requested, on a 0-100 scale. A class whose
/// precision and recall are both zero contributes F = 0.
double f_score(const ConfusionMatrix& cm, FAverage average = FAverage::Weighted);
inline double f_score_weighted(const ConfusionMatrix& cm) { return f_score(cm, FAverage::Weighted); }

/// F-score of always predicting the most frequent class (ties: patient).
double majority_baseline(std::span<const Label> labels, FAverage average = FAverage::Weighted);

/// Mann-Whitney AUC with average ranks for ties, on a 0-100 scale.
double auc(std::span<const double> scores, std::span<const Label> labels);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// One point per distinct score threshold, descending, from (0,0) to (1,1).
std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const Label> labels);

double trapezoid_area(std::span<const RocPoint> points);

}  // namespace lingua
