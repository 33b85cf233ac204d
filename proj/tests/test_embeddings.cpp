#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lingua/embeddings.hpp"
#include "lingua/error.hpp"

using namespace lingua;

namespace {

VectorTable table_of(const std::vector<std::vector<double>>& points) {
  VectorTable t(points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) t.add("w" + std::to_string(i), points[i]);
  return t;
}

VectorTable random_table(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  VectorTable t(dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.normal() + (i % 3 == 0 ? 2.0 : 0.0);
    t.add("w" + std::to_string(i), v);
  }
  return t;
}

// Sum of squared distances to the mean of each group.
double partition_inertia(const VectorTable& t, const std::vector<std::size_t>& group, std::size_t k) {
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> mean(t.dimension(), 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (group[i] != c) continue;
      for (std::size_t j = 0; j < t.dimension(); ++j) mean[j] += t.vector(i)[j];
      ++n;
    }
    if (n == 0) return std::numeric_limits<double>::infinity();
    for (double& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (group[i] == c) total += squared_distance(t.vector(i), mean);
    }
  }
  return total;
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("loading normalizes and lowercases") {
  std::istringstream in("Dog 3 4 0\ncat 0 0 2\n");
  const VectorTable t = read_vectors(in);
  CHECK(t.dimension() == 3);
  CHECK(t.size() == 2);
  const auto dog = t.vector(*t.find("dog"));
  CHECK(dog[0] == doctest::Approx(0.6));
  CHECK(dog[1] == doctest::Approx(0.8));
  CHECK(t.vector(*t.find("cat"))[2] == doctest::Approx(1.0));
}

TEST_CASE("loading errors name the line") {
  std::istringstream short_line("a 1 2 3\nb 1 2\n");
  try {
    read_vectors(short_line);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream text("a 1 x 3\n");
  CHECK_THROWS_AS(read_vectors(text), ValidationError);
  std::istringstream nan("a 1 nan 3\n");
  CHECK_THROWS_AS(read_vectors(nan), ValidationError);
}

TEST_CASE("K = 1 centroid is the mean") {
  const VectorTable t = random_table(12, 3, 4);
  KmeansConfig cfg;
  cfg.clusters = 1;
  const ClusterModel m = kmeans(t, cfg);
  std::vector<double> mean(3, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) mean[j] += t.vector(i)[j] / 12.0;
  }
  double inertia = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) inertia += squared_distance(t.vector(i), mean);
  for (std::size_t j = 0; j < 3; ++j) CHECK(m.centroid(0)[j] == doctest::Approx(mean[j]).epsilon(1e-12));
  CHECK(m.inertia == doctest::Approx(inertia).epsilon(1e-12));
}

TEST_CASE("two tight pairs match the best 2-partition") {
  const VectorTable t = table_of({{1.0, 0.1}, {-0.1, 1.0}, {1.0, -0.1}, {0.1, 1.0}});
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < 15; ++mask) {
    std::vector<std::size_t> group(4);
    for (std::size_t i = 0; i < 4; ++i) group[i] = (mask >> i) & 1u;
    best = std::min(best, partition_inertia(t, group, 2));
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    KmeansConfig cfg;
    cfg.clusters = 2;
    cfg.seed = seed;
    const ClusterModel m = kmeans(t, cfg);
    CHECK(m.inertia == doctest::Approx(best).epsilon(1e-12));
    CHECK(m.assignment.at("w0") == m.assignment.at("w2"));
    CHECK(m.assignment.at("w1") == m.assignment.at("w3"));
    CHECK(m.assignment.at("w0") != m.assignment.at("w1"));
    const auto c = m.centroid(m.assignment.at("w0"));
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("K = N gives zero inertia") {
  const VectorTable t = random_table(9, 4, 8);
  KmeansConfig cfg;
  cfg.clusters = 9;
  const ClusterModel m = kmeans(t, cfg);
  CHECK(m.inertia == doctest::Approx(0.0));
  std::set<std::size_t> used;
  for (const auto& [w, c] : m.assignment) used.insert(c);
  CHECK(used.size() == 9);
}

TEST_CASE("Lloyd iterations never increase inertia and end at a fixed point") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const VectorTable t = random_table(150, 5, seed);
    KmeansConfig cfg;
    cfg.clusters = 7;
    cfg.seed = seed;
    const ClusterModel m = kmeans(t, cfg);
    REQUIRE_FALSE(m.inertia_history.empty());
    for (std::size_t i = 1; i < m.inertia_history.size(); ++i) {
      CHECK(m.inertia_history[i] <= m.inertia_history[i - 1] + 1e-12);
    }
    CHECK(m.assignment.size() == t.size());
    double inertia = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::size_t nearest = 0;
      double d_best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < m.k; ++c) {
        const double d = squared_distance(t.vector(i), m.centroid(c));
        if (d < d_best) {
          d_best = d;
          nearest = c;
        }
      }
      CHECK(m.assignment.at(t.word(i)) == nearest);
      inertia += d_best;
    }
    CHECK(m.inertia == doctest::Approx(inertia).epsilon(1e-9));
  }
}

TEST_CASE("determinism and model file") {
  const VectorTable t = random_table(60, 3, 2);
  KmeansConfig cfg;
  cfg.clusters = 5;
  const ClusterModel a = kmeans(t, cfg);
  const ClusterModel b = kmeans(t, cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const ClusterModel back = ClusterModel::from_json(a.to_json());
  CHECK(back.assignment == a.assignment);
  CHECK(back.centroids == a.centroids);
  CHECK(back.to_json().dump() == a.to_json().dump());
}

TEST_CASE("assign looks up lowercased words") {
  std::istringstream in("dog 1 0\ncat 0.9 0.1\ntree 0 1\n");
  const VectorTable t = read_vectors(in);
  KmeansConfig cfg;
  cfg.clusters = 2;
  const ClusterModel m = kmeans(t, cfg);
  CHECK(assign("dog", m) == m.assignment.at("dog"));
  CHECK(assign("DOG", m) == assign("dog", m));
  CHECK_FALSE(assign("zebra", m));
  CHECK(assign("dog", m) == assign("cat", m));
  CHECK(assign("dog", m) != assign("tree", m));
}

TEST_CASE("too many clusters is an error") {
  KmeansConfig cfg;
  cfg.clusters = 4;
  CHECK_THROWS_AS(kmeans(random_table(3, 2, 1), cfg), ValidationError);
  CHECK(KmeansConfig{}.clusters == 100);
}

TEST_CASE("restricting a table keeps table order") {
  const VectorTable t = random_table(5, 2, 3);
  const VectorTable r = t.restrict_to({"w3", "w1", "absent"});
  REQUIRE(r.size() == 2);
  CHECK(r.word(0) == "w1");
  CHECK(r.word(1) == "w3");
}

}  // TEST_SUITE
