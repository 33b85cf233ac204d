#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

#include "fixtures.hpp"
#include "lingua/error.hpp"
#include "lingua/forest.hpp"

using namespace lingua;

namespace {

struct Data {
  Matrix x;
  std::vector<Label> y;
};

Data mixed(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Data d{Matrix(n, dim), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = rng.below(2) == 0;
    for (std::size_t j = 0; j < dim; ++j) {
      d.x(i, j) = j == 0 ? std::round(rng.normal() * 3.0) + (pos ? 1.5 : 0.0) : rng.normal();
    }
    d.y.push_back(pos ? Label::Positive : Label::Negative);
  }
  return d;
}

double split_gain(const Data& d, const std::vector<std::size_t>& rows, std::size_t feature, double threshold) {
  std::size_t lp = 0, ln = 0, rp = 0, rn = 0;
  for (std::size_t r : rows) {
    const bool pos = d.y[r] == Label::Positive;
    if (d.x(r, feature) <= threshold) (pos ? lp : ln)++;
    else (pos ? rp : rn)++;
  }
  const double n = static_cast<double>(rows.size());
  return gini(lp + rp, ln + rn) - (lp + ln) / n * gini(lp, ln) - (rp + rn) / n * gini(rp, rn);
}

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("gini") {
  CHECK(gini(0, 0) == 0.0);
  CHECK(gini(5, 0) == 0.0);
  CHECK(gini(2, 2) == 0.5);
  CHECK(gini(1, 3) == doctest::Approx(0.375));
}

TEST_CASE("label indicator feature is always the split") {
  Data d{Matrix(30, 1), {}};
  for (std::size_t i = 0; i < 30; ++i) {
    d.x(i, 0) = i % 3 == 0 ? 1.0 : 0.0;
    d.y.push_back(i % 3 == 0 ? Label::Positive : Label::Negative);
  }
  ForestConfig cfg;
  cfg.n_trees = 25;
  const ForestModel m = train_forest(d.x, d.y, cfg);
  for (const DecisionTree& t : m.trees) {
    REQUIRE_FALSE(t.nodes[0].is_leaf());
    CHECK(*t.nodes[0].feature == 0);
    CHECK(t.nodes[0].threshold == 0.5);
  }
  for (std::size_t i = 0; i < 30; ++i) CHECK(m.predict(d.x.row(i)) == d.y[i]);
}

TEST_CASE("constant features give single leaves predicting the majority") {
  Matrix x(9, 2);
  std::vector<Label> y;
  for (std::size_t i = 0; i < 9; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = -2.0;
    y.push_back(i < 2 ? Label::Positive : Label::Negative);
  }
  ForestConfig cfg;
  cfg.n_trees = 10;
  const ForestModel m = train_forest(x, y, cfg);
  std::size_t majority_negative = 0;
  for (const DecisionTree& t : m.trees) {
    CHECK(t.nodes.size() == 1);
    majority_negative += t.nodes[0].negatives > t.nodes[0].positives ? 1 : 0;
  }
  CHECK(majority_negative >= 8);
}

TEST_CASE("chosen splits beat every other threshold on the same features") {
  const Data d = mixed(40, 3, 2);
  std::vector<std::size_t> all(40);
  std::iota(all.begin(), all.end(), 0);
  Rng rng(1);
  const DecisionTree tree = grow_tree(d.x, d.y, all, 3, std::nullopt, 1, rng);
  // Route the rows to every node and brute-force the best gain there.
  std::function<void(std::size_t, std::vector<std::size_t>)> visit = [&](std::size_t id,
                                                                         std::vector<std::size_t> rows) {
    const TreeNode& node = tree.nodes[id];
    std::size_t pos = 0;
    for (std::size_t r : rows) pos += d.y[r] == Label::Positive;
    CHECK(node.positives == pos);
    CHECK(node.negatives == rows.size() - pos);
    if (node.is_leaf()) return;
    const double chosen = split_gain(d, rows, *node.feature, node.threshold);
    CHECK(chosen > 0.0);
    for (std::size_t f = 0; f < 3; ++f) {
      for (std::size_t a : rows) {
        for (std::size_t b : rows) {
          if (d.x(a, f) >= d.x(b, f)) continue;
          CHECK(chosen >= split_gain(d, rows, f, 0.5 * (d.x(a, f) + d.x(b, f))) - 1e-12);
        }
      }
    }
    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) (d.x(r, *node.feature) <= node.threshold ? left : right).push_back(r);
    visit(node.left, left);
    visit(node.right, right);
  };
  visit(0, all);
}

TEST_CASE("trees fit their own bootstrap at least as well as the majority class") {
  const Data d = mixed(60, 4, 7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    std::vector<std::size_t> sample(60);
    for (std::size_t& s : sample) s = rng.below(60);
    const DecisionTree t = grow_tree(d.x, d.y, sample, 2, std::nullopt, 1, rng);
    std::size_t correct = 0, pos = 0;
    for (std::size_t s : sample) {
      correct += t.vote(d.x.row(s)) == d.y[s];
      pos += d.y[s] == Label::Positive;
    }
    CHECK(correct >= std::max(pos, sample.size() - pos));
  }
}

TEST_CASE("leaves respect min_leaf and depth caps") {
  const Data d = mixed(80, 3, 3);
  ForestConfig cfg;
  cfg.n_trees = 10;
  cfg.min_leaf = 4;
  for (const DecisionTree& t : train_forest(d.x, d.y, cfg).trees) {
    for (const TreeNode& n : t.nodes) {
      if (n.is_leaf()) CHECK(n.positives + n.negatives >= 4);
      else CHECK(std::isfinite(n.threshold));
    }
  }
  cfg.min_leaf = 1;
  cfg.max_depth = 1;
  for (const DecisionTree& t : train_forest(d.x, d.y, cfg).trees) CHECK(t.nodes.size() <= 3);
}

TEST_CASE("same seed gives byte-equal forests") {
  const Data d = mixed(50, 5, 4);
  ForestConfig cfg;
  cfg.n_trees = 20;
  const ForestModel a = train_forest(d.x, d.y, cfg);
  const ForestModel b = train_forest(d.x, d.y, cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  cfg.seed = 2;
  CHECK(train_forest(d.x, d.y, cfg).to_json().dump() != a.to_json().dump());
  const ForestModel back = ForestModel::from_json(a.to_json());
  CHECK(back.to_json().dump() == a.to_json().dump());
}

TEST_CASE("positive scaling of a feature leaves predictions unchanged") {
  const Data d = mixed(70, 4, 5);
  ForestConfig cfg;
  cfg.n_trees = 30;
  const ForestModel base = train_forest(d.x, d.y, cfg);
  Rng rng(8);
  Matrix probes(200, 4);
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t j = 0; j < 4; ++j) probes(i, j) = rng.normal() * 3.0;
  }
  for (std::size_t j = 0; j < 4; ++j) {
    for (double scale : {0.001, 0.37, 3.0, 1234.5}) {
      Matrix xs = d.x;
      Matrix ps = probes;
      for (std::size_t i = 0; i < xs.rows(); ++i) xs(i, j) *= scale;
      for (std::size_t i = 0; i < ps.rows(); ++i) ps(i, j) *= scale;
      const ForestModel scaled = train_forest(xs, d.y, cfg);
      for (std::size_t i = 0; i < d.x.rows(); ++i) CHECK(scaled.proba(xs.row(i)) == base.proba(d.x.row(i)));
      for (std::size_t i = 0; i < probes.rows(); ++i) CHECK(scaled.proba(ps.row(i)) == base.proba(probes.row(i)));
    }
  }
}

TEST_CASE("proba is a vote fraction in [0, 1]") {
  const Data d = mixed(40, 3, 6);
  ForestConfig cfg;
  cfg.n_trees = 10;
  const ForestModel m = train_forest(d.x, d.y, cfg);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> x{rng.normal() * 4, rng.normal(), rng.normal()};
    const double p = m.proba(x);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p * 10.0 == doctest::Approx(std::round(p * 10.0)));
  }
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(m.proba(wrong), ValidationError);

  ForestModel three;
  three.dimension = 1;
  DecisionTree yes, no;
  yes.nodes.push_back(TreeNode{std::nullopt, 0.0, 0, 0, 1, 0});
  no.nodes.push_back(TreeNode{std::nullopt, 0.0, 0, 0, 0, 1});
  for (int i = 0; i < 10; ++i) three.trees.push_back(i < 3 ? yes : no);
  const std::vector<double> x{0.0};
  CHECK(three.proba(x) == doctest::Approx(0.3));
  CHECK(three.predict(x) == Label::Negative);
  three.trees.assign(4, yes);
  CHECK(three.proba(x) == 1.0);
}

TEST_CASE("training errors") {
  const Data d = mixed(10, 2, 1);
  std::vector<Label> one(10, Label::Negative);
  CHECK_THROWS_AS(train_forest(d.x, one, {}), ValidationError);
  ForestConfig bad;
  bad.mtry = 5;
  CHECK_THROWS_AS(train_forest(d.x, d.y, bad), ValidationError);
  CHECK(ForestConfig{}.n_trees == 100);
}

}  // TEST_SUITE
