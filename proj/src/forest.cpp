#include "lingua/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingua/error.hpp"

namespace lingua {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lingua-screen/forest/v1";

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

struct Grower {
  const Matrix& x;
  std::span<const Label> y;
  std::size_t mtry;
  std::optional<std::size_t> max_depth;
  std::size_t min_leaf;
  Rng& rng;
  DecisionTree tree;
  std::vector<std::size_t> features;
  std::vector<std::pair<double, bool>> column;

  std::optional<Split> best_split(std::span<const std::size_t> sample, std::size_t pos,
                                  std::size_t neg) {
    const std::size_t n = sample.size();
    const double parent = gini(pos, neg);
    // Partial Fisher-Yates: the first mtry entries are the candidates.
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = 0; i < mtry; ++i) {
      std::swap(features[i], features[i + rng.below(features.size() - i)]);
    }
    std::optional<Split> best;
    for (std::size_t f = 0; f < mtry; ++f) {
      const std::size_t feature = features[f];
      column.clear();
      for (std::size_t s : sample) column.emplace_back(x(s, feature), y[s] == Label::Positive);
      std::sort(column.begin(), column.end());
      std::size_t left_pos = 0;
      std::size_t left_neg = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        (column[i].second ? left_pos : left_neg)++;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t left_n = i + 1;
        if (left_n < min_leaf || n - left_n < min_leaf) continue;
        const double wl = static_cast<double>(left_n) / static_cast<double>(n);
        const double gain = parent - wl * gini(left_pos, left_neg) -
                            (1.0 - wl) * gini(pos - left_pos, neg - left_neg);
        if (gain > 1e-12 && (!best || gain > best->gain)) {
          best = Split{feature, 0.5 * (column[i].first + column[i + 1].first), gain};
        }
      }
    }
    return best;
  }

  std::size_t grow(std::vector<std::size_t> sample, std::size_t depth) {
    std::size_t pos = 0;
    for (std::size_t s : sample) pos += y[s] == Label::Positive ? 1 : 0;
    const std::size_t neg = sample.size() - pos;
    const std::size_t id = tree.nodes.size();
    tree.nodes.push_back(TreeNode{std::nullopt, 0.0, 0, 0, pos, neg});
    const bool pure = pos == 0 || neg == 0;
    const bool too_small = sample.size() < 2 * min_leaf;
    const bool too_deep = max_depth && depth >= *max_depth;
    if (pure || too_small || too_deep) return id;
    const auto split = best_split(sample, pos, neg);
    if (!split) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t s : sample) (x(s, split->feature) <= split->threshold ? left : right).push_back(s);
    sample = {};
    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[id];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    return id;
  }
};

void check_training_set(const Matrix& x, std::span<const Label> y) {
  if (x.rows() == 0) throw ValidationError("cannot train on an empty matrix");
  if (x.rows() != y.size()) throw ValidationError("row count does not match label count");
  const bool has_pos = std::find(y.begin(), y.end(), Label::Positive) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), Label::Negative) != y.end();
  if (!has_pos || !has_neg) throw ValidationError("training labels contain a single class");
}

json node_json(const DecisionTree& tree, std::size_t id) {
  const TreeNode& n = tree.nodes[id];
  json out = {{"pos", n.positives}, {"neg", n.negatives}};
  if (!n.is_leaf()) {
    out["feature"] = *n.feature;
    out["threshold"] = n.threshold;
    out["left"] = node_json(tree, n.left);
    out["right"] = node_json(tree, n.right);
  }
  return out;
}

std::size_t node_from_json(const json& j, DecisionTree& tree) {
  const std::size_t id = tree.nodes.size();
  tree.nodes.push_back(TreeNode{std::nullopt, 0.0, 0, 0, j.at("pos").get<std::size_t>(),
                                j.at("neg").get<std::size_t>()});
  if (j.contains("feature")) {
    const std::size_t feature = j.at("feature").get<std::size_t>();
    const double threshold = j.at("threshold").get<double>();
    const std::size_t l = node_from_json(j.at("left"), tree);
    const std::size_t r = node_from_json(j.at("right"), tree);
    TreeNode& node = tree.nodes[id];
    node.feature = feature;
    node.threshold = threshold;
    node.left = l;
    node.right = r;
  }
  return id;
}

}  // namespace

double gini(std::size_t positives, std::size_t negatives) {
  const double n = static_cast<double>(positives + negatives);
  if (n == 0.0) return 0.0;
  const double p = static_cast<double>(positives) / n;
  return 2.0 * p * (1.0 - p);
}

std::size_t DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = x[*n.feature] <= n.threshold ? n.left : n.right;
  }
  return id;
}

Label DecisionTree::vote(std::span<const double> x) const {
  const TreeNode& leaf = nodes[leaf_for(x)];
  return leaf.positives >= leaf.negatives ? Label::Positive : Label::Negative;
}

json DecisionTree::to_json() const { return node_json(*this, 0); }

DecisionTree DecisionTree::from_json(const json& j) {
  DecisionTree tree;
  node_from_json(j, tree);
  return tree;
}

double ForestModel::proba(std::span<const double> x) const {
  if (x.size() != dimension) {
    throw ValidationError("feature vector has dimension " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(dimension));
  }
  if (trees.empty()) return 0.5;
  std::size_t votes = 0;
  for (const DecisionTree& t : trees) votes += t.vote(x) == Label::Positive ? 1 : 0;
  return static_cast<double>(votes) / static_cast<double>(trees.size());
}

json ForestModel::to_json() const {
  json list = json::array();
  for (const DecisionTree& t : trees) list.push_back(t.to_json());
  return {{"format", kFormat}, {"dimension", dimension}, {"trees", std::move(list)}};
}

ForestModel ForestModel::from_json(const json& j) {
  if (j.value("format", std::string{}) != kFormat) throw ValidationError("not a forest model file");
  ForestModel m;
  m.dimension = j.at("dimension").get<std::size_t>();
  for (const auto& t : j.at("trees")) m.trees.push_back(DecisionTree::from_json(t));
  return m;
}

DecisionTree grow_tree(const Matrix& x, std::span<const Label> y,
                       std::span<const std::size_t> sample, std::size_t mtry,
                       std::optional<std::size_t> max_depth, std::size_t min_leaf, Rng& rng) {
  if (mtry < 1 || mtry > x.cols()) throw ValidationError("mtry must lie in [1, feature count]");
  if (min_leaf < 1) throw ValidationError("min_leaf must be at least 1");
  Grower g{x, y, mtry, max_depth, min_leaf, rng, {}, std::vector<std::size_t>(x.cols()), {}};
  g.grow(std::vector<std::size_t>(sample.begin(), sample.end()), 0);
  return std::move(g.tree);
}

ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ForestConfig& config) {
  check_training_set(x, y);
  if (x.cols() == 0) throw ValidationError("cannot train a forest without features");
  const std::size_t mtry =
      config.mtry.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols())))));
  ForestModel model;
  model.dimension = x.cols();
  model.trees.reserve(config.n_trees);
  const std::size_t n = x.rows();
  std::vector<std::size_t> sample(n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    Rng rng(config.seed + t);
    for (std::size_t& s : sample) s = rng.below(n);
    model.trees.push_back(grow_tree(x, y, sample, mtry, config.max_depth, config.min_leaf, rng));
  }
  return model;
}

}  // namespace lingua
