#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "lingua/corpus.hpp"
#include "lingua/matrix.hpp"

namespace lingua {

/// Per-feature z-scoring fitted on training rows. Features with zero spread
/// are flagged constant and map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  // 0 marks a constant feature

  static Standardizer fit(const Matrix& x);
  std::vector<double> apply(std::span<const double> row) const;
};

struct SvmConfig {
  double c = 1.0;
  double tol = 1e-3;  // stop when max - min projected gradient falls below this
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 1;
};

struct SvmModel {
  std::vector<double> w;  // in standardized feature space
  double b = 0.0;
  Standardizer scaler;

  std::size_t dimension() const { return w.size(); }
  /// w . standardize(x) + b
  double decision(std::span<const double> x) const;
  Label predict(std::span<const double> x) const {
    return decision(x) >= 0.0 ? Label::Positive : Label::Negative;
  }

  nlohmann::json to_json() const;
  static SvmModel from_json(const nlohmann::json& j);
};

/// Optional training diagnostics.
struct SvmTrace {
  std::vector<double> alpha;
  std::vector<double> dual_objective;    // after every epoch
  std::vector<double> primal_objective;  // after every epoch
  std::size_t epochs = 0;
  bool converged = false;
};

/// L2-regularized hinge loss solved by dual coordinate descent. The bias is
/// an extra constant feature (regularized with the weights). Labels map to
/// +1 (patient) and -1 (control).
SvmModel train_svm(const Matrix& x, std::span<const Label> y, const SvmConfig& config,
                   SvmTrace* trace = nullptr);

}  // namespace lingua
