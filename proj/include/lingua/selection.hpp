#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lingua/corpus.hpp"
#include "lingua/matrix.hpp"
#include "lingua/svm.hpp"

namespace lingua {

enum class RankMethod { InformationGain, Rfe };
std::string_view rank_method_name(RankMethod method);  // "IG" / "RFE"

struct RankedFeature {
  std::string name;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct Ranking {
  RankMethod method = RankMethod::InformationGain;
  std::vector<RankedFeature> entries;  // rank order

  /// "rank,feature,score,method" rows with a header.
  std::string to_csv() const;
};

enum class Binning {
  EqualWidth,  // equal-width bins over the observed range
  Rank,        // equal-width bins over average ranks
};

/// Label entropy in bits.
double label_entropy(std::span<const Label> y);

/// Bin index of every value; a constant column maps to a single bin.
std::vector<std::size_t> discretize(std::span<const double> values, std::size_t bins,
                                    Binning binning = Binning::EqualWidth);

/// H(y) - H(y | bin) in bits for one discretized column.
double information_gain(std::span<const std::size_t> bins, std::span<const Label> y);

/// Ranks every column by information gain, ties broken by name.
Ranking information_gain(const Matrix& x, std::span<const std::string> names,
                         std::span<const Label> y, std::size_t bins = 10,
                         Binning binning = Binning::EqualWidth);

/// SVM recursive feature elimination: retrain on the survivors, drop the
/// ceil(drop_fraction * survivors) smallest w^2 (at least one, never below
/// target_k), repeat until target_k remain. Survivors rank first, then
/// features in reverse elimination order. Scores are w^2 at the last fit each
/// feature took part in.
Ranking rfe(const Matrix& x, std::span<const std::string> names, std::span<const Label> y,
            const SvmConfig& config, double drop_fraction = 0.1, std::size_t target_k = 1);

}  // namespace lingua
