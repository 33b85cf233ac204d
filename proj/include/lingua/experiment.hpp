#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lingua/corpus.hpp"
#include "lingua/embeddings.hpp"
#include "lingua/features.hpp"
#include "lingua/forest.hpp"
#include "lingua/metrics.hpp"
#include "lingua/roc_svg.hpp"
#include "lingua/svm.hpp"
#include "lingua/topics.hpp"

namespace lingua {

struct FoldAssignment {
  std::vector<std::size_t> fold;  // per document
  std::size_t k = 0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> train_indices(std::size_t f) const;
  std::vector<std::size_t> test_indices(std::size_t f) const;
};

/// Shuffles each class (seeded) and deals it round-robin over the folds; the
/// second class continues where the first stopped so fold sizes stay even.
FoldAssignment stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

enum class ClassifierKind { Svm, Forest };
std::string_view classifier_name(ClassifierKind kind);  // "svm" / "forest"
std::string_view classifier_color(ClassifierKind kind);

struct PipelineConfig {
  LdaConfig lda;
  KmeansConfig kmeans;
  SvmConfig svm;
  ForestConfig forest;
};

/// Corpus-dependent feature machinery: inventory plus topic and cluster models.
struct FittedFeatures {
  FeatureSpace space;
  std::optional<TopicModel> topics;
  std::optional<ClusterModel> clusters;

  FeatureModels models() const {
    return {topics ? &*topics : nullptr, clusters ? &*clusters : nullptr};
  }
  nlohmann::json to_json() const;
};

/// Fits the feature machinery for `channels` on `train` only. Topic and
/// cluster models use `seed`; clustering covers the vectors of words that
/// occur in `train`.
FittedFeatures fit_features(const Corpus& train, ChannelSet channels, const PipelineConfig& pipeline,
                            const VectorTable* vectors, std::uint64_t seed);

/// Every document of `corpus` as a row over `fitted.space`.
FeatureMatrix extract_matrix(const Corpus& corpus, const FittedFeatures& fitted,
                             std::size_t* uniform_topics = nullptr);

/// Full feature matrix of a category with the machinery fitted on the whole
/// corpus (the setting used for exports and feature rankings).
FeatureMatrix featurize(const Corpus& corpus, const Category& category, const PipelineConfig& pipeline,
                        const VectorTable* vectors, std::uint64_t seed);

struct TrainedCategory {
  Category category;
  FeatureSpace space;
  std::optional<SvmModel> svm;
  std::optional<ForestModel> forest;
};

/// Everything fitted for one training split.
struct FoldFit {
  FittedFeatures features;
  std::vector<TrainedCategory> categories;
  std::size_t uniform_topic_docs = 0;

  nlohmann::json to_json() const;
};

/// Fits features (unless `shared` is given) and every classifier of every
/// category on `train`.
FoldFit fit_fold(const Corpus& train, std::span<const Category> categories,
                 std::span<const ClassifierKind> classifiers, const PipelineConfig& pipeline,
                 const VectorTable* vectors, std::uint64_t seed, const FittedFeatures* shared = nullptr);

struct CvConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  bool paper_mode = false;  // fit features once on the whole corpus
  FAverage f_average = FAverage::Weighted;
  std::size_t threads = 1;
};

struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t test_size = 0;
  std::optional<double> auc;  // absent when the fold holds one class
  double f_score = 0.0;
};

struct EvalReport {
  Category category;
  ClassifierKind classifier = ClassifierKind::Svm;
  double auc = 0.0;      // pooled, 0-100
  double f_score = 0.0;  // pooled, 0-100
  ConfusionMatrix confusion;
  std::vector<RocPoint> roc;
  std::vector<FoldMetrics> folds;
  double fold_auc_mean = 0.0;
  double fold_auc_sd = 0.0;
  double fold_f_mean = 0.0;
  double fold_f_sd = 0.0;
  std::vector<double> scores;  // out-of-fold, corpus order
};

struct ExperimentReport {
  std::string profile;
  std::uint64_t seed = 0;
  bool paper_mode = false;
  FAverage f_average = FAverage::Weighted;
  std::size_t documents = 0;
  std::size_t positives = 0;
  double majority_baseline = 0.0;
  std::size_t uniform_topic_docs = 0;
  nlohmann::json config;
  std::vector<EvalReport> rows;

  const EvalReport* find(std::string_view category, ClassifierKind classifier) const;
  nlohmann::json to_json() const;
  /// ROC curves of one category, SVM first.
  std::vector<RocCurve> curves(std::string_view category) const;
};

/// Stratified k-fold cross-validation over every (category, classifier)
/// pair. Out-of-fold scores are pooled for AUC, ROC and F; per-fold metrics
/// are kept alongside.
ExperimentReport cross_validate(const Corpus& corpus, std::span<const Category> categories,
                                std::span<const ClassifierKind> classifiers,
                                const PipelineConfig& pipeline, const CvConfig& cv,
                                const VectorTable* vectors = nullptr);

/// Plain-text table: Features | SVM AUC | SVM F | RF AUC | RF F.
std::string report_table(const nlohmann::json& report);

nlohmann::json pipeline_json(const PipelineConfig& pipeline);

}  // namespace lingua
