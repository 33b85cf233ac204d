#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "lingua/corpus.hpp"
#include "lingua/matrix.hpp"
#include "lingua/random.hpp"

namespace lingua {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> mtry;  // default ceil(sqrt(d))
  std::optional<std::size_t> max_depth;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 1;
};

struct TreeNode {
  // Internal nodes: samples with x[feature] <= threshold go left.
  std::optional<std::size_t> feature;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;

  bool is_leaf() const { return !feature.has_value(); }
};

class DecisionTree {
 public:
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  /// Index of the leaf reached by x.
  std::size_t leaf_for(std::span<const double> x) const;
  /// Majority class of the leaf; ties vote positive.
  Label vote(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);
};

struct ForestModel {
  std::size_t dimension = 0;
  std::vector<DecisionTree> trees;

  /// Fraction of trees voting positive.
  double proba(std::span<const double> x) const;
  Label predict(std::span<const double> x) const {
    return proba(x) >= 0.5 ? Label::Positive : Label::Negative;
  }

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);
};

double gini(std::size_t positives, std::size_t negatives);

/// Grows one CART tree on the given sample (indices into x, repeats allowed).
/// Each node draws `mtry` candidate features without replacement and takes the
/// best Gini gain over midpoints between consecutive distinct values.
DecisionTree grow_tree(const Matrix& x, std::span<const Label> y,
                       std::span<const std::size_t> sample, std::size_t mtry,
                       std::optional<std::size_t> max_depth, std::size_t min_leaf, Rng& rng);

/// Tree i uses its own generator seeded with seed + i for the bootstrap and
/// the feature draws.
ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ForestConfig& config);

}  // namespace lingua
