#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace lingua {

/// Word vectors, L2-normalized, keyed by lowercased word.
class VectorTable {
 public:
  VectorTable() = default;
  explicit VectorTable(std::size_t dimension) : dimension_(dimension) {}

  /// Adds a vector as given (no normalization). Returns false if the word
  /// already exists.
  bool add(std::string word, std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::span<const double> vector(std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }
  std::optional<std::size_t> find(std::string_view word) const;

  /// Rows whose word is in `words`, keeping table order.
  VectorTable restrict_to(const std::set<std::string>& words) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

/// GloVe-style text: "word v1 ... vD" per line. Vectors are L2-normalized;
/// all-zero vectors are kept as zero. Later duplicates (after lowercasing)
/// are ignored.
VectorTable read_vectors(std::istream& in);
VectorTable load_vectors(const std::filesystem::path& path);

struct KmeansConfig {
  std::size_t clusters = 100;
  std::uint64_t seed = 1;
  std::size_t max_iter = 100;
  double tol = 1e-6;  // stop when every centroid moves less than this
};

struct ClusterModel {
  std::size_t k = 0;
  std::size_t dimension = 0;
  std::vector<double> centroids;  // k x dimension
  std::vector<std::string> words;
  std::unordered_map<std::string, std::size_t> assignment;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after every assignment step
  std::size_t iterations = 0;

  std::span<const double> centroid(std::size_t c) const {
    return {centroids.data() + c * dimension, dimension};
  }

  nlohmann::json to_json() const;
  static ClusterModel from_json(const nlohmann::json& j);
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// k-means++ seeding followed by Lloyd iterations. Ties go to the lowest
/// centroid index. An emptied cluster is moved onto the point farthest from
/// its current centroid.
ClusterModel kmeans(const VectorTable& table, const KmeansConfig& config);

/// Cluster of the lowercased word, if known.
std::optional<std::size_t> assign(std::string_view word, const ClusterModel& model);

}  // namespace lingua
