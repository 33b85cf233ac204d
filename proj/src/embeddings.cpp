#include "lingua/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "lingua/error.hpp"
#include "lingua/random.hpp"
#include "lingua/util.hpp"

namespace lingua {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lingua-screen/clusters/v1";

// Nearest centroid, lowest index on ties.
std::size_t nearest(std::span<const double> x, const std::vector<double>& centroids,
                    std::size_t k, std::size_t dim, double* best_distance) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = squared_distance(x, {centroids.data() + c * dim, dim});
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_distance) *best_distance = best_d;
  return best;
}

}  // namespace

bool VectorTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dimension_) throw ValidationError("vector dimension mismatch for '" + word + "'");
  if (index_.count(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

std::optional<std::size_t> VectorTable::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VectorTable VectorTable::restrict_to(const std::set<std::string>& words) const {
  VectorTable out(dimension_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words.count(words_[i])) out.add(words_[i], vector(i));
  }
  return out;
}

VectorTable read_vectors(std::istream& in) {
  VectorTable table;
  bool first = true;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    values.clear();
    std::string item;
    while (fields >> item) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError("non-numeric vector component '" + item + "' at line " +
                              std::to_string(line_no));
      }
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite vector component at line " + std::to_string(line_no));
      }
      values.push_back(v);
    }
    if (values.empty()) throw ValidationError("empty vector at line " + std::to_string(line_no));
    if (first) {
      table = VectorTable(values.size());
      first = false;
    } else if (values.size() != table.dimension()) {
      throw ValidationError("vector at line " + std::to_string(line_no) + " has dimension " +
                            std::to_string(values.size()) + ", expected " +
                            std::to_string(table.dimension()));
    }
    double norm = 0.0;
    for (double v : values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : values) v /= norm;
    }
    table.add(to_lower(word), values);
  }
  return table;
}

VectorTable load_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vector file " + path.string());
  return read_vectors(in);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

ClusterModel kmeans(const VectorTable& table, const KmeansConfig& config) {
  const std::size_t n = table.size();
  const std::size_t k = config.clusters;
  const std::size_t dim = table.dimension();
  if (k < 1) throw ValidationError("k-means needs at least one cluster");
  if (k > n) {
    throw ValidationError("k-means cluster count " + std::to_string(k) + " exceeds the " +
                          std::to_string(n) + " available words");
  }

  ClusterModel model;
  model.k = k;
  model.dimension = dim;
  model.centroids.assign(k * dim, 0.0);
  Rng rng(config.seed);

  // k-means++ seeding.
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double d : closest) total += d;
      pick = total > 0.0 ? rng.categorical(closest) : rng.below(n);
    }
    const auto x = table.vector(pick);
    std::copy(x.begin(), x.end(), model.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], squared_distance(table.vector(i), x));
    }
  }

  std::vector<std::size_t> labels(n);
  std::vector<double> distances(n);
  const auto assign_all = [&] {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = nearest(table.vector(i), model.centroids, k, dim, &distances[i]);
      inertia += distances[i];
    }
    model.inertia_history.push_back(inertia);
    return inertia;
  };

  model.inertia = assign_all();
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> sizes(k);
  for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = table.vector(i);
      for (std::size_t j = 0; j < dim; ++j) sums[labels[i] * dim + j] += x[j];
      ++sizes[labels[i]];
    }
    std::vector<bool> taken(n, false);
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> updated(dim);
      if (sizes[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
          updated[j] = sums[c * dim + j] / static_cast<double>(sizes[c]);
        }
      } else {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!taken[i] && distances[i] > far_d) {
            far_d = distances[i];
            far = i;
          }
        }
        taken[far] = true;
        const auto x = table.vector(far);
        updated.assign(x.begin(), x.end());
      }
      shift = std::max(shift, std::sqrt(squared_distance(updated, model.centroid(c))));
      std::copy(updated.begin(), updated.end(),
                model.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
    }
    model.inertia = assign_all();
    model.iterations = iter + 1;
    if (shift < config.tol) break;
  }

  model.words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.words.push_back(table.word(i));
    model.assignment.emplace(table.word(i), labels[i]);
  }
  return model;
}

std::optional<std::size_t> assign(std::string_view word, const ClusterModel& model) {
  const auto it = model.assignment.find(to_lower(word));
  if (it == model.assignment.end()) return std::nullopt;
  return it->second;
}

json ClusterModel::to_json() const {
  json cents = json::array();
  for (std::size_t c = 0; c < k; ++c) {
    const auto row = centroid(c);
    cents.push_back(std::vector<double>(row.begin(), row.end()));
  }
  json assigned = json::array();
  for (const std::string& w : words) assigned.push_back({w, assignment.at(w)});
  return {{"format", kFormat},    {"k", k},
          {"dimension", dimension}, {"inertia", inertia},
          {"iterations", iterations}, {"centroids", std::move(cents)},
          {"assignment", std::move(assigned)}};
}

ClusterModel ClusterModel::from_json(const json& j) {
  if (j.value("format", std::string{}) != kFormat) {
    throw ValidationError("not a cluster model file (expected format " + std::string(kFormat) + ")");
  }
  ClusterModel m;
  m.k = j.at("k").get<std::size_t>();
  m.dimension = j.at("dimension").get<std::size_t>();
  m.inertia = j.at("inertia").get<double>();
  m.iterations = j.at("iterations").get<std::size_t>();
  for (const auto& row : j.at("centroids")) {
    const auto values = row.get<std::vector<double>>();
    if (values.size() != m.dimension) throw ValidationError("centroid has wrong dimension");
    m.centroids.insert(m.centroids.end(), values.begin(), values.end());
  }
  if (m.centroids.size() != m.k * m.dimension) throw ValidationError("wrong number of centroids");
  for (const auto& pair : j.at("assignment")) {
    const auto word = pair.at(0).get<std::string>();
    const auto cluster = pair.at(1).get<std::size_t>();
    if (cluster >= m.k) throw ValidationError("assignment refers to a missing cluster");
    m.words.push_back(word);
    m.assignment.emplace(word, cluster);
  }
  return m;
}

}  // namespace lingua
