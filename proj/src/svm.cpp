#include "lingua/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lingua/error.hpp"
#include "lingua/random.hpp"

namespace lingua {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lingua-screen/svm/v1";

void check_training_set(const Matrix& x, std::span<const Label> y) {
  if (x.rows() == 0) throw ValidationError("cannot train on an empty matrix");
  if (x.rows() != y.size()) throw ValidationError("row count does not match label count");
  const bool has_pos = std::find(y.begin(), y.end(), Label::Positive) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), Label::Negative) != y.end();
  if (!has_pos || !has_neg) throw ValidationError("training labels contain a single class");
}

}  // namespace

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.sd.assign(x.cols(), 0.0);
  const double n = static_cast<double>(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) sum += x(i, j);
    const double mean = sum / n;
    double var = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double d = x(i, j) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / n);
    s.mean[j] = mean;
    s.sd[j] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 0.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  std::vector<double> z(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) z[j] = sd[j] > 0.0 ? (row[j] - mean[j]) / sd[j] : 0.0;
  return z;
}

double SvmModel::decision(std::span<const double> x) const {
  if (x.size() != w.size()) {
    throw ValidationError("feature vector has dimension " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(w.size()));
  }
  double score = b;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (scaler.sd[j] > 0.0) score += w[j] * (x[j] - scaler.mean[j]) / scaler.sd[j];
  }
  return score;
}

json SvmModel::to_json() const {
  return {{"format", kFormat}, {"w", w}, {"b", b}, {"mean", scaler.mean}, {"sd", scaler.sd}};
}

SvmModel SvmModel::from_json(const json& j) {
  if (j.value("format", std::string{}) != kFormat) throw ValidationError("not an SVM model file");
  SvmModel m;
  m.w = j.at("w").get<std::vector<double>>();
  m.b = j.at("b").get<double>();
  m.scaler.mean = j.at("mean").get<std::vector<double>>();
  m.scaler.sd = j.at("sd").get<std::vector<double>>();
  if (m.scaler.mean.size() != m.w.size() || m.scaler.sd.size() != m.w.size()) {
    throw ValidationError("SVM model arrays disagree in length");
  }
  return m;
}

SvmModel train_svm(const Matrix& x, std::span<const Label> y, const SvmConfig& config,
                   SvmTrace* trace) {
  check_training_set(x, y);
  if (!(config.c > 0.0)) throw ValidationError("SVM C must be positive");

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  SvmModel model;
  model.scaler = Standardizer::fit(x);

  // Standardized rows with the bias column appended.
  Matrix z(n, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = model.scaler.apply(x.row(i));
    std::copy(zi.begin(), zi.end(), z.row(i).begin());
    z(i, d) = 1.0;
  }
  std::vector<double> sign(n);
  std::vector<double> q_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    sign[i] = y[i] == Label::Positive ? 1.0 : -1.0;
    const auto zi = z.row(i);
    q_diag[i] = std::inner_product(zi.begin(), zi.end(), zi.begin(), 0.0);
  }

  const double c = config.c;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);

  const auto objectives = [&](double& dual, double& primal) {
    const double half_norm = 0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    double alpha_sum = 0.0;
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      alpha_sum += alpha[i];
      const auto zi = z.row(i);
      const double margin = sign[i] * std::inner_product(w.begin(), w.end(), zi.begin(), 0.0);
      hinge += std::max(0.0, 1.0 - margin);
    }
    dual = half_norm - alpha_sum;
    primal = half_norm + c * hinge;
  };

  std::size_t epoch = 0;
  bool converged = false;
  while (epoch < config.max_epochs && !converged) {
    rng.shuffle(std::span<std::size_t>(order));
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const auto zi = z.row(i);
      const double g = sign[i] * std::inner_product(w.begin(), w.end(), zi.begin(), 0.0) - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] == c) {
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::min(std::max(old - g / q_diag[i], 0.0), c);
      const double step = (alpha[i] - old) * sign[i];
      for (std::size_t j = 0; j <= d; ++j) w[j] += step * zi[j];
    }
    ++epoch;
    converged = pg_max - pg_min <= config.tol;
    if (trace) {
      double dual = 0.0, primal = 0.0;
      objectives(dual, primal);
      trace->dual_objective.push_back(dual);
      trace->primal_objective.push_back(primal);
    }
  }

  model.b = w[d];
  w.pop_back();
  model.w = std::move(w);
  if (trace) {
    trace->alpha = alpha;
    trace->epochs = epoch;
    trace->converged = converged;
  }
  return model;
}

}  // namespace lingua
