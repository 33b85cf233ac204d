#include "lingua/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "lingua/error.hpp"
#include "lingua/random.hpp"
#include "lingua/util.hpp"

namespace lingua {

using nlohmann::json;

namespace {

constexpr const char* kReportFormat = "lingua-screen/report/v1";

Matrix category_matrix(const FeatureMatrix& full, ChannelSet channels, std::size_t width) {
  Matrix m(full.rows.size(), width);
  for (std::size_t r = 0; r < full.rows.size(); ++r) {
    for (const auto& [col, v] : compose(full.space, full.rows[r], channels)) m(r, col) = v;
  }
  return m;
}

std::pair<double, double> mean_sd(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

Label predicted(ClassifierKind kind, double score) {
  const double threshold = kind == ClassifierKind::Svm ? 0.0 : 0.5;
  return score >= threshold ? Label::Positive : Label::Negative;
}

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_folds(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs at least two folds");
  FoldAssignment out{std::vector<std::size_t>(labels.size(), 0), k, seed};
  Rng rng(seed);
  std::size_t next = 0;
  for (Label cls : {Label::Positive, Label::Negative}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < k) {
      throw ValidationError("class '" + std::string(label_name(cls)) + "' has " +
                            std::to_string(members.size()) + " documents, fewer than the " +
                            std::to_string(k) + " folds");
    }
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) {
      out.fold[i] = next;
      next = (next + 1) % k;
    }
  }
  return out;
}

std::string_view classifier_name(ClassifierKind kind) {
  return kind == ClassifierKind::Svm ? "svm" : "forest";
}

std::string_view classifier_color(ClassifierKind kind) {
  return kind == ClassifierKind::Svm ? "magenta" : "blue";
}

json FittedFeatures::to_json() const {
  json out = {{"space", space.to_json()}};
  out["topics"] = topics ? topics->to_json() : json(nullptr);
  out["clusters"] = clusters ? clusters->to_json() : json(nullptr);
  return out;
}

FittedFeatures fit_features(const Corpus& train, ChannelSet channels, const PipelineConfig& pipeline,
                            const VectorTable* vectors, std::uint64_t seed) {
  FittedFeatures fitted;
  const std::size_t topic_k = channels.contains(Channel::Topic) ? pipeline.lda.topics : 0;
  const std::size_t cluster_k = channels.contains(Channel::Cluster) ? pipeline.kmeans.clusters : 0;
  fitted.space = build_feature_space(train, channels, topic_k, cluster_k);
  if (channels.contains(Channel::Topic)) {
    LdaConfig cfg = pipeline.lda;
    cfg.seed = seed;
    fitted.topics = train_lda(train, cfg);
  }
  if (channels.contains(Channel::Cluster)) {
    if (!vectors) throw ValidationError("CLUSTER features need a word-vector file");
    std::set<std::string> words;
    for (const Document& d : train.documents) {
      for (const Sentence& s : d.sentences) {
        for (const Token& t : s.tokens) words.insert(to_lower(t.surface));
      }
    }
    KmeansConfig cfg = pipeline.kmeans;
    cfg.seed = seed;
    fitted.clusters = kmeans(vectors->restrict_to(words), cfg);
  }
  return fitted;
}

FeatureMatrix extract_matrix(const Corpus& corpus, const FittedFeatures& fitted,
                             std::size_t* uniform_topics) {
  FeatureMatrix m;
  m.space = fitted.space;
  const FeatureModels models = fitted.models();
  for (const Document& d : corpus.documents) {
    m.ids.push_back(d.id);
    m.labels.push_back(d.label);
    m.rows.push_back(extract_features(d, fitted.space, models, uniform_topics));
  }
  return m;
}

FeatureMatrix featurize(const Corpus& corpus, const Category& category, const PipelineConfig& pipeline,
                        const VectorTable* vectors, std::uint64_t seed) {
  require_channels(corpus, category.channels);
  const FittedFeatures fitted = fit_features(corpus, category.channels, pipeline, vectors, seed);
  return extract_matrix(corpus, fitted);
}

json FoldFit::to_json() const {
  json cats = json::array();
  for (const TrainedCategory& c : categories) {
    json entry = {{"category", c.category.id}, {"space", c.space.to_json()}};
    entry["svm"] = c.svm ? c.svm->to_json() : json(nullptr);
    entry["forest"] = c.forest ? c.forest->to_json() : json(nullptr);
    cats.push_back(std::move(entry));
  }
  return {{"features", features.to_json()}, {"categories", std::move(cats)}};
}

FoldFit fit_fold(const Corpus& train, std::span<const Category> categories,
                 std::span<const ClassifierKind> classifiers, const PipelineConfig& pipeline,
                 const VectorTable* vectors, std::uint64_t seed, const FittedFeatures* shared) {
  require_both_classes(train);
  ChannelSet channels;
  for (const Category& c : categories) channels = channels | c.channels;
  FoldFit fit;
  fit.features = shared ? *shared : fit_features(train, channels, pipeline, vectors, seed);
  const FeatureMatrix full = extract_matrix(train, fit.features, &fit.uniform_topic_docs);

  SvmConfig svm_cfg = pipeline.svm;
  svm_cfg.seed = seed;
  ForestConfig forest_cfg = pipeline.forest;
  forest_cfg.seed = seed;
  for (const Category& c : categories) {
    TrainedCategory trained{c, fit.features.space.project(c.channels), {}, {}};
    const Matrix x = category_matrix(full, c.channels, trained.space.size());
    for (ClassifierKind kind : classifiers) {
      if (kind == ClassifierKind::Svm) {
        trained.svm = train_svm(x, full.labels, svm_cfg);
      } else {
        ForestConfig cfg = forest_cfg;
        if (cfg.mtry) cfg.mtry = std::min(*cfg.mtry, x.cols());
        trained.forest = train_forest(x, full.labels, cfg);
      }
    }
    fit.categories.push_back(std::move(trained));
  }
  return fit;
}

const EvalReport* ExperimentReport::find(std::string_view category, ClassifierKind classifier) const {
  for (const EvalReport& r : rows) {
    if (r.category.id == category && r.classifier == classifier) return &r;
  }
  return nullptr;
}

std::vector<RocCurve> ExperimentReport::curves(std::string_view category) const {
  std::vector<RocCurve> out;
  for (ClassifierKind kind : {ClassifierKind::Svm, ClassifierKind::Forest}) {
    if (const EvalReport* r = find(category, kind)) {
      const std::string label = kind == ClassifierKind::Svm ? "SVM" : "Random Forest";
      out.push_back({label + " (AUC " + two_decimals(r->auc) + ")", r->roc,
                     std::string(classifier_color(kind))});
    }
  }
  return out;
}

json ExperimentReport::to_json() const {
  json rows_json = json::array();
  for (const EvalReport& r : rows) {
    json roc = json::array();
    for (const RocPoint& p : r.roc) roc.push_back({p.fpr, p.tpr});
    json folds_json = json::array();
    for (const FoldMetrics& f : r.folds) {
      folds_json.push_back({{"fold", f.fold},
                            {"test_size", f.test_size},
                            {"auc", f.auc ? json(*f.auc) : json(nullptr)},
                            {"f_score", f.f_score}});
    }
    rows_json.push_back({{"category", r.category.id},
                         {"display", r.category.display},
                         {"channels", r.category.channels.to_string()},
                         {"classifier", std::string(classifier_name(r.classifier))},
                         {"auc", r.auc},
                         {"f_score", r.f_score},
                         {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
                                        {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}},
                         {"fold_auc_mean", r.fold_auc_mean},
                         {"fold_auc_sd", r.fold_auc_sd},
                         {"fold_f_mean", r.fold_f_mean},
                         {"fold_f_sd", r.fold_f_sd},
                         {"folds", std::move(folds_json)},
                         {"roc", std::move(roc)}});
  }
  return {{"format", kReportFormat},
          {"profile", profile},
          {"seed", seed},
          {"paper_mode", paper_mode},
          {"f_average", std::string(f_average_name(f_average))},
          {"documents", documents},
          {"positives", positives},
          {"majority_baseline", majority_baseline},
          {"uniform_topic_docs", uniform_topic_docs},
          {"config", config},
          {"rows", std::move(rows_json)}};
}

ExperimentReport cross_validate(const Corpus& corpus, std::span<const Category> categories,
                                std::span<const ClassifierKind> classifiers,
                                const PipelineConfig& pipeline, const CvConfig& cv,
                                const VectorTable* vectors) {
  require_both_classes(corpus);
  if (categories.empty() || classifiers.empty()) {
    throw ValidationError("nothing to evaluate: no categories or classifiers given");
  }
  ChannelSet channels;
  for (const Category& c : categories) channels = channels | c.channels;
  require_channels(corpus, channels);
  if (channels.contains(Channel::Cluster) && !vectors) {
    throw ValidationError("CLUSTER features need a word-vector file");
  }

  const std::vector<Label> labels = corpus.labels();
  const FoldAssignment folds = stratified_folds(labels, cv.folds, cv.seed);

  std::optional<FittedFeatures> shared;
  if (cv.paper_mode) shared = fit_features(corpus, channels, pipeline, vectors, cv.seed);

  const std::size_t n_rows = categories.size() * classifiers.size();
  std::vector<std::vector<double>> pooled(n_rows, std::vector<double>(corpus.documents.size(), 0.0));
  std::vector<std::size_t> uniform_topics(cv.folds, 0);

  parallel_for(cv.folds, cv.threads, [&](std::size_t f) {
    const std::uint64_t fold_seed = cv.seed + f;
    const auto train_idx = folds.train_indices(f);
    const auto test_idx = folds.test_indices(f);
    const Corpus train = corpus.subset(train_idx);
    const Corpus test = corpus.subset(test_idx);
    const FoldFit fit = fit_fold(train, categories, classifiers, pipeline, vectors, fold_seed,
                                 shared ? &*shared : nullptr);
    const FeatureMatrix test_full = extract_matrix(test, fit.features, &uniform_topics[f]);
    for (std::size_t c = 0; c < categories.size(); ++c) {
      const TrainedCategory& trained = fit.categories[c];
      const Matrix x = category_matrix(test_full, categories[c].channels, trained.space.size());
      for (std::size_t k = 0; k < classifiers.size(); ++k) {
        std::vector<double>& out = pooled[c * classifiers.size() + k];
        for (std::size_t r = 0; r < test_idx.size(); ++r) {
          out[test_idx[r]] = classifiers[k] == ClassifierKind::Svm ? trained.svm->decision(x.row(r))
                                                                   : trained.forest->proba(x.row(r));
        }
      }
    }
  });

  ExperimentReport report;
  report.seed = cv.seed;
  report.paper_mode = cv.paper_mode;
  report.f_average = cv.f_average;
  report.documents = corpus.documents.size();
  report.positives = corpus.count(Label::Positive);
  report.majority_baseline = majority_baseline(labels, cv.f_average);
  for (std::size_t u : uniform_topics) report.uniform_topic_docs += u;

  for (std::size_t c = 0; c < categories.size(); ++c) {
    for (std::size_t k = 0; k < classifiers.size(); ++k) {
      EvalReport row;
      row.category = categories[c];
      row.classifier = classifiers[k];
      row.scores = pooled[c * classifiers.size() + k];
      row.auc = auc(row.scores, labels);
      row.roc = roc_points(row.scores, labels);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        row.confusion.add(predicted(row.classifier, row.scores[i]), labels[i]);
      }
      row.f_score = f_score(row.confusion, cv.f_average);
      std::vector<double> fold_aucs;
      std::vector<double> fold_fs;
      for (std::size_t f = 0; f < cv.folds; ++f) {
        const auto idx = folds.test_indices(f);
        std::vector<double> s;
        std::vector<Label> l;
        ConfusionMatrix cm;
        for (std::size_t i : idx) {
          s.push_back(row.scores[i]);
          l.push_back(labels[i]);
          cm.add(predicted(row.classifier, row.scores[i]), labels[i]);
        }
        FoldMetrics m{f, idx.size(), std::nullopt, f_score(cm, cv.f_average)};
        const bool both = std::count(l.begin(), l.end(), Label::Positive) > 0 &&
                          std::count(l.begin(), l.end(), Label::Negative) > 0;
        if (both) {
          m.auc = auc(s, l);
          fold_aucs.push_back(*m.auc);
        }
        fold_fs.push_back(m.f_score);
        row.folds.push_back(m);
      }
      std::tie(row.fold_auc_mean, row.fold_auc_sd) = mean_sd(fold_aucs);
      std::tie(row.fold_f_mean, row.fold_f_sd) = mean_sd(fold_fs);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string report_table(const json& report) {
  struct Cells {
    std::string display;
    std::optional<std::pair<double, double>> svm;
    std::optional<std::pair<double, double>> forest;
  };
  std::vector<std::string> order;
  std::map<std::string, Cells> cells;
  for (const json& row : report.at("rows")) {
    const std::string id = row.at("category").get<std::string>();
    if (!cells.count(id)) {
      order.push_back(id);
      cells[id].display = row.value("display", id);
    }
    const auto values = std::make_pair(row.at("auc").get<double>(), row.at("f_score").get<double>());
    (row.at("classifier").get<std::string>() == "svm" ? cells[id].svm : cells[id].forest) = values;
  }
  std::size_t width = 8;
  for (const auto& [id, c] : cells) width = std::max(width, c.display.size());
  const auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  const auto cell = [&](const std::optional<std::pair<double, double>>& v, bool first) {
    if (!v) return pad("-", 8);
    return pad(two_decimals(first ? v->first : v->second), 8);
  };
  std::ostringstream out;
  out << pad("Features", width) << " | SVM AUC  | SVM F    | RF AUC   | RF F\n";
  out << std::string(width, '-') << "-+----------+----------+----------+---------\n";
  for (const std::string& id : order) {
    const Cells& c = cells[id];
    out << pad(c.display, width) << " | " << cell(c.svm, true) << " | " << cell(c.svm, false) << " | "
        << cell(c.forest, true) << " | " << cell(c.forest, false) << '\n';
  }
  if (report.contains("majority_baseline")) {
    out << "\nMajority baseline F: " << two_decimals(report.at("majority_baseline").get<double>()) << '\n';
  }
  return out.str();
}

json pipeline_json(const PipelineConfig& p) {
  return {{"lda",
           {{"topics", p.lda.topics},
            {"alpha", p.lda.effective_alpha()},
            {"beta", p.lda.beta},
            {"iterations", p.lda.iterations},
            {"burn_in", p.lda.burn_in},
            {"infer_iterations", p.lda.infer_iterations},
            {"infer_burn_in", p.lda.infer_burn_in}}},
          {"kmeans", {{"clusters", p.kmeans.clusters}, {"max_iter", p.kmeans.max_iter}, {"tol", p.kmeans.tol}}},
          {"svm", {{"c", p.svm.c}, {"tol", p.svm.tol}, {"max_epochs", p.svm.max_epochs}}},
          {"forest",
           {{"trees", p.forest.n_trees},
            {"mtry", p.forest.mtry ? json(*p.forest.mtry) : json(nullptr)},
            {"max_depth", p.forest.max_depth ? json(*p.forest.max_depth) : json(nullptr)},
            {"min_leaf", p.forest.min_leaf}}}};
}

}  // namespace lingua
