#include "lingua/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lingua/annotators.hpp"
#include "lingua/corpus.hpp"
#include "lingua/embeddings.hpp"
#include "lingua/error.hpp"
#include "lingua/experiment.hpp"
#include "lingua/features.hpp"
#include "lingua/roc_svg.hpp"
#include "lingua/selection.hpp"
#include "lingua/synth.hpp"
#include "lingua/topics.hpp"
#include "lingua/util.hpp"

namespace lingua {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSeedEnv = "LINGUA_SCREEN_SEED";

enum Command : unsigned {
  kIngest = 1u << 0,
  kAnnotate = 1u << 1,
  kTrainTopics = 1u << 2,
  kClusterVectors = 1u << 3,
  kFeaturize = 1u << 4,
  kEvaluate = 1u << 5,
  kSelect = 1u << 6,
  kSynth = 1u << 7,
  kReport = 1u << 8,
};

constexpr unsigned kAll = 0x1ff;
constexpr unsigned kInput = kIngest | kAnnotate | kTrainTopics | kFeaturize | kEvaluate | kSelect;
constexpr unsigned kFeatures = kFeaturize | kEvaluate | kSelect;
constexpr unsigned kLda = kTrainTopics | kFeatures;
constexpr unsigned kKmeans = kClusterVectors | kFeatures;

enum class Kind { Value, Path, Flag };

struct OptionSpec {
  const char* key;  // config key; the flag is the key with '-' for '_'
  Kind kind;
  unsigned commands;
  const char* help;
};

// Every setting a config file or flag can carry.
const OptionSpec kOptions[] = {
    {"seed", Kind::Value, kAll & ~kReport, "random seed (fallback: $LINGUA_SCREEN_SEED, then 1)"},
    {"threads", Kind::Value, kEvaluate, "worker threads (default: available cores)"},
    {"out", Kind::Path, kAll, "output directory"},
    {"corpus", Kind::Path, kInput | kClusterVectors, "corpus JSONL"},
    {"conllu", Kind::Path, kInput, "CoNLL-U annotations"},
    {"sidecar", Kind::Path, kInput, "JSONL sidecar with frames, belief tags and sentiment"},
    {"store", Kind::Path, kInput | kClusterVectors, "annotated store written by ingest or annotate"},
    {"pos_column", Kind::Value, kInput, "CoNLL-U tag column: xpos or upos"},
    {"pos_lexicon", Kind::Path, kAnnotate, "word<TAB>tag lexicon for the fallback tagger"},
    {"sentiment_lexicon", Kind::Path, kAnnotate, "word<TAB>score lexicon, scores in [-1, 1]"},
    {"vectors", Kind::Path, kClusterVectors | kFeatures, "word vectors, one word per line"},
    {"preset", Kind::Value, kFeatures | kTrainTopics, "labwriting or twitter"},
    {"category", Kind::Value, kFeatures, "feature categories, comma separated (default: every row)"},
    {"classifier", Kind::Value, kEvaluate, "svm, forest or both"},
    {"paper_mode", Kind::Flag, kEvaluate, "fit topics, clusters and inventories on the whole corpus"},
    {"folds", Kind::Value, kEvaluate, "cross-validation folds (default 10)"},
    {"f_average", Kind::Value, kEvaluate, "weighted, macro or micro"},
    {"topics", Kind::Value, kLda, "LDA topics (default: 20 labwriting, 40 twitter)"},
    {"alpha", Kind::Value, kLda, "LDA document prior (default 5/K)"},
    {"beta", Kind::Value, kLda, "LDA word prior"},
    {"lda_iterations", Kind::Value, kLda, "Gibbs sweeps"},
    {"lda_burn_in", Kind::Value, kLda, "training burn-in sweeps, below --lda-iterations"},
    {"infer_iterations", Kind::Value, kLda, "Gibbs sweeps for unseen documents"},
    {"infer_burn_in", Kind::Value, kLda, "inference sweeps before averaging"},
    {"top_words", Kind::Value, kTrainTopics, "words listed per topic"},
    {"clusters", Kind::Value, kKmeans, "K-means clusters (default 100)"},
    {"kmeans_max_iter", Kind::Value, kKmeans, "Lloyd iterations"},
    {"svm_c", Kind::Value, kEvaluate | kSelect, "SVM cost"},
    {"svm_tol", Kind::Value, kEvaluate | kSelect, "SVM stopping tolerance"},
    {"svm_max_epochs", Kind::Value, kEvaluate | kSelect, "SVM epoch cap"},
    {"trees", Kind::Value, kEvaluate, "forest size"},
    {"mtry", Kind::Value, kEvaluate, "features tried per split (default sqrt)"},
    {"max_depth", Kind::Value, kEvaluate, "tree depth cap"},
    {"min_leaf", Kind::Value, kEvaluate, "minimum samples per leaf"},
    {"method", Kind::Value, kSelect, "ig, rfe or both"},
    {"bins", Kind::Value, kSelect, "IG discretization bins"},
    {"binning", Kind::Value, kSelect, "equal-width or rank"},
    {"target_k", Kind::Value, kSelect, "RFE survivors"},
    {"drop_fraction", Kind::Value, kSelect, "RFE fraction dropped per round"},
    {"strength", Kind::Value, kSynth, "marker strength in [0, 1] for every channel"},
    {"docs_per_class", Kind::Value, kSynth, "documents per class"},
    {"min_tokens", Kind::Value, kSynth, "shortest document"},
    {"max_tokens", Kind::Value, kSynth, "longest document"},
    {"report", Kind::Path, kReport, "report.json written by evaluate"},
};

const OptionSpec* find_option(std::string_view key) {
  for (const OptionSpec& o : kOptions) {
    if (key == o.key) return &o;
  }
  return nullptr;
}

std::string flag_name(std::string_view key) {
  std::string flag = "--" + std::string(key);
  for (char& c : flag) {
    if (c == '_') c = '-';
  }
  return flag;
}

// Resolved key/value settings of one invocation.
class Settings {
 public:
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<fs::path> path(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    return fs::path(*v);
  }

  fs::path existing_path(const std::string& key) const {
    auto p = path(key);
    if (!p) throw ValidationError("missing " + flag_name(key));
    if (!fs::exists(*p)) throw ValidationError(flag_name(key) + ": no such file '" + p->string() + "'");
    return *p;
  }

  template <typename T>
  std::optional<T> number(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    T out{};
    const char* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) {
      throw ValidationError("invalid value '" + *v + "' for " + flag_name(key));
    }
    return out;
  }

  template <typename T>
  T number_or(const std::string& key, T fallback) const {
    return number<T>(key).value_or(fallback);
  }

  bool flag(const std::string& key) const {
    auto v = text(key);
    if (!v) return false;
    const std::string s = to_lower(*v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ValidationError("invalid boolean '" + *v + "' for " + flag_name(key));
  }

 private:
  std::map<std::string, std::string> values_;
};

// Flat "key = value" file; relative paths resolve against the file's directory.
void read_config(const fs::path& file, Settings& settings) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config " + file.string());
  const fs::path base = file.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(body.substr(0, eq)));
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    const std::string value(trim(body.substr(eq + 1)));
    const OptionSpec* spec = find_option(key);
    if (!spec || key == "report") {
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (spec->kind == Kind::Path && !value.empty() && fs::path(value).is_relative()) {
      settings.set(key, (base / value).lexically_normal().string());
    } else {
      settings.set(key, value);
    }
  }
}

std::uint64_t resolve_seed(const Settings& s) {
  if (s.has("seed")) return *s.number<std::uint64_t>("seed");
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    std::uint64_t seed = 0;
    const std::string_view v(env);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ValidationError(std::string("invalid ") + kSeedEnv + " '" + env + "'");
    }
    return seed;
  }
  return 1;
}

fs::path output_dir(const Settings& s) {
  auto out = s.path("out");
  if (!out) throw ValidationError("missing --out");
  fs::create_directories(*out);
  return *out;
}

Profile resolve_profile(const Settings& s) {
  const std::string name = s.text("preset").value_or("labwriting");
  auto profile = parse_profile(name);
  if (!profile) throw ValidationError("unknown preset '" + name + "' (expected labwriting or twitter)");
  return *profile;
}

Corpus load_input(const Settings& s) {
  if (s.has("store")) {
    if (s.has("corpus") || s.has("conllu") || s.has("sidecar")) {
      throw ValidationError("--store cannot be combined with --corpus, --conllu or --sidecar");
    }
    const fs::path path = s.existing_path("store");
    std::ifstream in(path);
    if (!in) throw Error("cannot open store " + path.string());
    return read_store(in, path.stem().string());
  }
  if (!s.has("corpus")) throw ValidationError("missing --corpus or --store");
  Corpus corpus = load_corpus(s.existing_path("corpus"));
  if (s.has("conllu")) {
    const std::string column = to_lower(s.text("pos_column").value_or("xpos"));
    if (column != "xpos" && column != "upos") {
      throw ValidationError("--pos-column must be xpos or upos");
    }
    const fs::path path = s.existing_path("conllu");
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    corpus = attach_conllu(std::move(corpus),
                           parse_conllu(in, column == "upos" ? PosColumn::Upos : PosColumn::Xpos));
  }
  for (Document& doc : corpus.documents) {
    if (!doc.sentences.empty()) continue;
    for (auto& words : tokenize(doc.raw_text)) {
      Sentence sentence;
      for (auto& w : words) sentence.tokens.push_back(Token{std::move(w), {}, {}, {}});
      doc.sentences.push_back(std::move(sentence));
    }
  }
  if (s.has("sidecar")) corpus = attach_annotations(std::move(corpus), s.existing_path("sidecar"));
  return corpus;
}

std::optional<VectorTable> load_optional_vectors(const Settings& s) {
  if (!s.has("vectors")) return std::nullopt;
  return load_vectors(s.existing_path("vectors"));
}

PipelineConfig pipeline_config(const Settings& s, Profile profile) {
  PipelineConfig p;
  p.lda.topics = s.number_or<std::size_t>("topics", profile == Profile::Twitter ? 40 : 20);
  p.lda.alpha = s.number_or<double>("alpha", 0.0);
  p.lda.beta = s.number_or<double>("beta", p.lda.beta);
  p.lda.iterations = s.number_or<std::size_t>("lda_iterations", p.lda.iterations);
  p.lda.burn_in = s.number_or<std::size_t>("lda_burn_in", p.lda.burn_in);
  p.lda.infer_iterations = s.number_or<std::size_t>("infer_iterations", p.lda.infer_iterations);
  p.lda.infer_burn_in = s.number_or<std::size_t>("infer_burn_in", p.lda.infer_burn_in);
  p.lda.validate();
  p.kmeans.clusters = s.number_or<std::size_t>("clusters", p.kmeans.clusters);
  p.kmeans.max_iter = s.number_or<std::size_t>("kmeans_max_iter", p.kmeans.max_iter);
  if (p.kmeans.clusters == 0) throw ValidationError("--clusters must be positive");
  p.svm.c = s.number_or<double>("svm_c", p.svm.c);
  p.svm.tol = s.number_or<double>("svm_tol", p.svm.tol);
  p.svm.max_epochs = s.number_or<std::size_t>("svm_max_epochs", p.svm.max_epochs);
  if (!(p.svm.c > 0.0) || !(p.svm.tol > 0.0)) throw ValidationError("--svm-c and --svm-tol must be positive");
  p.forest.n_trees = s.number_or<std::size_t>("trees", p.forest.n_trees);
  if (p.forest.n_trees == 0) throw ValidationError("--trees must be positive");
  if (auto m = s.number<std::size_t>("mtry")) {
    if (*m == 0) throw ValidationError("--mtry must be positive");
    p.forest.mtry = *m;
  }
  if (auto d = s.number<std::size_t>("max_depth")) p.forest.max_depth = *d;
  p.forest.min_leaf = s.number_or<std::size_t>("min_leaf", p.forest.min_leaf);
  if (p.forest.min_leaf == 0) throw ValidationError("--min-leaf must be positive");
  return p;
}

std::vector<Category> resolve_categories(const Settings& s, Profile profile) {
  if (!s.has("category")) return profile_categories(profile);
  std::vector<Category> out;
  std::set<std::string> seen;
  for (const std::string& part : split(*s.text("category"), ',')) {
    const std::string name(trim(part));
    if (name.empty()) continue;
    Category c = resolve_category(name, profile);
    if (seen.insert(c.id).second) out.push_back(std::move(c));
  }
  if (out.empty()) throw ValidationError("--category names no category");
  return out;
}

const VectorTable* require_vectors(const std::vector<Category>& categories,
                                   const std::optional<VectorTable>& vectors) {
  for (const Category& c : categories) {
    if (c.channels.contains(Channel::Cluster) && !vectors) {
      throw ValidationError("category '" + c.id + "' uses CLUSTER features and needs --vectors");
    }
  }
  return vectors ? &*vectors : nullptr;
}

void write_store_file(const Corpus& corpus, const fs::path& path) {
  std::ostringstream buf;
  write_store(corpus, buf);
  write_file_atomic(path, buf.str());
}

// --- subcommands ---------------------------------------------------------------

int cmd_ingest(const Settings& s, std::ostream& out) {
  const Corpus corpus = load_input(s);
  const fs::path path = output_dir(s) / "store.jsonl";
  write_store_file(corpus, path);
  out << "wrote " << corpus.documents.size() << " documents to " << path.string() << '\n';
  return 0;
}

int cmd_annotate(const Settings& s, std::ostream& out) {
  Corpus corpus = load_input(s);
  const PosLexicon pos = s.has("pos_lexicon") ? load_pos_lexicon(s.existing_path("pos_lexicon")) : PosLexicon{};
  std::optional<SentimentLexicon> sentiment;
  if (s.has("sentiment_lexicon")) sentiment = load_sentiment_lexicon(s.existing_path("sentiment_lexicon"));
  std::size_t tagged = 0;
  for (Document& doc : corpus.documents) {
    for (Sentence& sentence : doc.sentences) {
      for (Token& tok : sentence.tokens) {
        if (tok.pos) continue;
        tok.pos = fallback_tag(tok.surface, pos);
        ++tagged;
      }
      if (sentiment && !sentence.sentiment) {
        SentenceSentiment scored = lexicon_sentiment(sentence, *sentiment);
        sentence.sentiment = scored.level;
        sentence.phrases = std::move(scored.phrases);
        doc.has_phrase_layer = true;
      }
    }
  }
  const fs::path path = output_dir(s) / "store.jsonl";
  write_store_file(corpus, path);
  out << "tagged " << tagged << " tokens; wrote " << path.string() << '\n';
  return 0;
}

int cmd_train_topics(const Settings& s, std::ostream& out) {
  const Corpus corpus = load_input(s);
  PipelineConfig p = pipeline_config(s, resolve_profile(s));
  p.lda.seed = resolve_seed(s);
  const TopicModel model = train_lda(corpus, p.lda);
  const fs::path dir = output_dir(s);
  write_file_atomic(dir / "topics.json", model.to_json().dump() + "\n");
  const std::size_t n = s.number_or<std::size_t>("top_words", 10);
  std::ostringstream listing;
  for (std::size_t k = 0; k < model.topic_count(); ++k) {
    listing << "topic " << k << ':';
    for (const auto& [word, p_word] : top_words(model, k, n)) listing << ' ' << word;
    listing << '\n';
  }
  write_file_atomic(dir / "topics.txt", listing.str());
  out << listing.str();
  return 0;
}

int cmd_cluster_vectors(const Settings& s, std::ostream& out) {
  VectorTable table = load_vectors(s.existing_path("vectors"));
  if (s.has("corpus") || s.has("store")) {
    std::set<std::string> words;
    for (const Document& d : load_input(s).documents) {
      for (const Sentence& sentence : d.sentences) {
        for (const Token& t : sentence.tokens) words.insert(to_lower(t.surface));
      }
    }
    table = table.restrict_to(words);
  }
  KmeansConfig cfg = pipeline_config(s, Profile::LabWriting).kmeans;
  cfg.seed = resolve_seed(s);
  const ClusterModel model = kmeans(table, cfg);
  write_file_atomic(output_dir(s) / "clusters.json", model.to_json().dump() + "\n");
  out << "clustered " << model.words.size() << " words into " << model.k << " clusters; inertia "
      << format_double(model.inertia) << '\n';
  return 0;
}

int cmd_featurize(const Settings& s, std::ostream& out) {
  const Profile profile = resolve_profile(s);
  const Corpus corpus = load_input(s);
  const auto categories = resolve_categories(s, profile);
  const auto vectors = load_optional_vectors(s);
  const VectorTable* table = require_vectors(categories, vectors);
  const PipelineConfig p = pipeline_config(s, profile);
  const std::uint64_t seed = resolve_seed(s);
  const fs::path dir = output_dir(s);
  for (const Category& c : categories) {
    const FeatureMatrix m = featurize(corpus, c, p, table, seed);
    const fs::path path = dir / ("features_" + c.id + ".csv");
    write_file_atomic(path, m.to_csv());
    out << c.id << ": " << m.rows.size() << " x " << m.space.size() << " -> " << path.string() << '\n';
  }
  return 0;
}

std::vector<ClassifierKind> resolve_classifiers(const Settings& s) {
  const std::string name = to_lower(s.text("classifier").value_or("both"));
  if (name == "svm") return {ClassifierKind::Svm};
  if (name == "forest" || name == "rf") return {ClassifierKind::Forest};
  if (name == "both") return {ClassifierKind::Svm, ClassifierKind::Forest};
  throw ValidationError("unknown classifier '" + name + "' (expected svm, forest or both)");
}

void write_report_outputs(const json& report_json, const fs::path& dir, std::ostream& out) {
  const std::string table = report_table(report_json);
  write_file_atomic(dir / "report.txt", table);
  std::vector<std::string> order;
  std::map<std::string, std::vector<RocCurve>> curves;
  std::map<std::string, std::string> titles;
  for (const json& row : report_json.at("rows")) {
    const std::string id = row.at("category").get<std::string>();
    if (!curves.count(id)) {
      order.push_back(id);
      titles[id] = row.value("display", id);
    }
    const bool svm = row.at("classifier").get<std::string>() == "svm";
    RocCurve curve;
    char auc_text[32];
    std::snprintf(auc_text, sizeof(auc_text), "%.2f", row.at("auc").get<double>());
    curve.name = std::string(svm ? "SVM" : "Random Forest") + " (AUC " + auc_text + ")";
    curve.color = std::string(classifier_color(svm ? ClassifierKind::Svm : ClassifierKind::Forest));
    for (const json& p : row.at("roc")) curve.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    curves[id].push_back(std::move(curve));
  }
  for (const std::string& id : order) {
    write_file_atomic(dir / ("roc_" + id + ".svg"), render_roc_svg(curves[id], titles[id]));
  }
  out << table;
}

int cmd_evaluate(const Settings& s, std::ostream& out) {
  const Profile profile = resolve_profile(s);
  const auto categories = resolve_categories(s, profile);
  const auto classifiers = resolve_classifiers(s);
  const PipelineConfig pipeline = pipeline_config(s, profile);
  CvConfig cv;
  cv.folds = s.number_or<std::size_t>("folds", cv.folds);
  cv.seed = resolve_seed(s);
  cv.paper_mode = s.flag("paper_mode");
  cv.threads = s.number_or<std::size_t>("threads", default_thread_count());
  if (cv.threads == 0) throw ValidationError("--threads must be positive");
  if (auto avg = s.text("f_average")) {
    auto parsed = parse_f_average(*avg);
    if (!parsed) throw ValidationError("unknown F average '" + *avg + "'");
    cv.f_average = *parsed;
  }
  const fs::path dir = output_dir(s);
  const Corpus corpus = load_input(s);
  const auto vectors = load_optional_vectors(s);
  require_channels(corpus, [&] {
    ChannelSet all;
    for (const Category& c : categories) all = all | c.channels;
    return all;
  }());
  const VectorTable* table = require_vectors(categories, vectors);

  ExperimentReport report = cross_validate(corpus, categories, classifiers, pipeline, cv, table);
  report.profile = std::string(profile_name(profile));
  report.config = pipeline_json(pipeline);
  report.config["folds"] = cv.folds;
  json cats = json::array();
  for (const Category& c : categories) cats.push_back(c.id);
  report.config["categories"] = std::move(cats);
  const json report_json = report.to_json();
  write_file_atomic(dir / "report.json", report_json.dump(2) + "\n");
  write_report_outputs(report_json, dir, out);
  return 0;
}

int cmd_select(const Settings& s, std::ostream& out) {
  const Profile profile = resolve_profile(s);
  const Corpus corpus = load_input(s);
  require_both_classes(corpus);
  const auto categories = resolve_categories(s, profile);
  const auto vectors = load_optional_vectors(s);
  const VectorTable* table = require_vectors(categories, vectors);
  const PipelineConfig p = pipeline_config(s, profile);
  const std::uint64_t seed = resolve_seed(s);
  const std::string method = to_lower(s.text("method").value_or("both"));
  if (method != "ig" && method != "rfe" && method != "both") {
    throw ValidationError("unknown method '" + method + "' (expected ig, rfe or both)");
  }
  const std::string binning_name = to_lower(s.text("binning").value_or("equal-width"));
  Binning binning = Binning::EqualWidth;
  if (binning_name == "rank") {
    binning = Binning::Rank;
  } else if (binning_name != "equal-width" && binning_name != "equal_width") {
    throw ValidationError("unknown binning '" + binning_name + "'");
  }
  const std::size_t bins = s.number_or<std::size_t>("bins", 10);
  const std::size_t target_k = s.number_or<std::size_t>("target_k", 1);
  const double drop = s.number_or<double>("drop_fraction", 0.1);
  if (!(drop > 0.0 && drop < 1.0)) throw ValidationError("--drop-fraction must be in (0, 1)");
  SvmConfig svm = p.svm;
  svm.seed = seed;
  const fs::path dir = output_dir(s);
  for (const Category& c : categories) {
    const FeatureMatrix m = featurize(corpus, c, p, table, seed);
    const Matrix x = m.dense();
    const std::vector<std::string> names(m.space.names().begin(), m.space.names().end());
    std::vector<Ranking> rankings;
    if (method != "rfe") rankings.push_back(information_gain(x, names, m.labels, bins, binning));
    if (method != "ig") rankings.push_back(rfe(x, names, m.labels, svm, drop, std::min(target_k, names.size())));
    for (const Ranking& r : rankings) {
      const std::string tag = to_lower(std::string(rank_method_name(r.method)));
      const fs::path path = dir / ("ranking_" + c.id + "_" + tag + ".csv");
      write_file_atomic(path, r.to_csv());
      out << c.id << " " << rank_method_name(r.method) << ":";
      for (std::size_t i = 0; i < std::min<std::size_t>(5, r.entries.size()); ++i) {
        out << ' ' << r.entries[i].name;
      }
      out << '\n';
    }
  }
  return 0;
}

int cmd_synth(const Settings& s, std::ostream& out) {
  SynthConfig cfg;
  cfg.seed = resolve_seed(s);
  cfg.set_strength(s.number_or<double>("strength", 1.0));
  cfg.docs_per_class = s.number_or<std::size_t>("docs_per_class", cfg.docs_per_class);
  cfg.min_tokens = s.number_or<std::size_t>("min_tokens", cfg.min_tokens);
  cfg.max_tokens = s.number_or<std::size_t>("max_tokens", cfg.max_tokens);
  cfg.validate();
  const Corpus corpus = synth_corpus(cfg);
  const fs::path dir = output_dir(s);

  std::ostringstream buf;
  write_corpus(corpus, buf);
  write_file_atomic(dir / "corpus.jsonl", buf.str());
  buf.str("");
  write_conllu(corpus, buf);
  write_file_atomic(dir / "annotations.conllu", buf.str());
  buf.str("");
  write_sidecar(corpus, buf);
  write_file_atomic(dir / "annotations.sidecar.jsonl", buf.str());
  buf.str("");
  write_vectors(synth_vectors(cfg), buf);
  write_file_atomic(dir / "vectors.txt", buf.str());
  write_file_atomic(dir / "experiment.cfg",
                    "# synthetic corpus, strength " + format_double(cfg.tag_strength) + ", seed " +
                        std::to_string(cfg.seed) +
                        "\ncorpus = corpus.jsonl\n"
                        "conllu = annotations.conllu\n"
                        "sidecar = annotations.sidecar.jsonl\n"
                        "vectors = vectors.txt\n"
                        "preset = labwriting\n");
  out << "wrote " << corpus.documents.size() << " documents to " << dir.string() << '\n';
  return 0;
}

int cmd_report(const Settings& s, std::ostream& out) {
  const fs::path path = s.existing_path("report");
  json report;
  try {
    report = json::parse(read_file(path));
    if (!report.contains("rows")) throw ValidationError("no rows");
  } catch (const json::exception& e) {
    throw ValidationError("malformed report " + path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError("malformed report " + path.string() + ": " + e.what());
  }
  if (s.has("out")) {
    write_report_outputs(report, output_dir(s), out);
  } else {
    out << report_table(report);
  }
  return 0;
}

struct Subcommand {
  const char* name;
  Command bit;
  const char* help;
  int (*fn)(const Settings&, std::ostream&);
};

const Subcommand kSubcommands[] = {
    {"ingest", kIngest, "merge a corpus with CoNLL-U and sidecar annotations into a store", cmd_ingest},
    {"annotate", kAnnotate, "fill missing POS tags and sentiment with the fallback annotators", cmd_annotate},
    {"train-topics", kTrainTopics, "fit an LDA topic model", cmd_train_topics},
    {"cluster-vectors", kClusterVectors, "cluster word vectors with K-means", cmd_cluster_vectors},
    {"featurize", kFeaturize, "write feature matrices as CSV", cmd_featurize},
    {"evaluate", kEvaluate, "cross-validate classifiers and write report + ROC plots", cmd_evaluate},
    {"select", kSelect, "rank features by information gain and RFE", cmd_select},
    {"synth", kSynth, "generate a synthetic annotated corpus", cmd_synth},
    {"report", kReport, "render the table of a report.json", cmd_report},
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stylometric screening toolkit", "lingua-screen"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> bool_values;
  std::map<CLI::App*, std::pair<const Subcommand*, std::vector<std::pair<std::string, CLI::Option*>>>> registry;

  for (const Subcommand& sub : kSubcommands) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    auto& entry = registry[cmd];
    entry.first = &sub;
    cmd->add_option("--config", flag_values["config"], "flat key = value file; flags win")->type_name("PATH");
    entry.second.emplace_back("config", cmd->get_option("--config"));
    for (const OptionSpec& o : kOptions) {
      if (!(o.commands & sub.bit)) continue;
      const std::string key = o.key;
      CLI::Option* opt = nullptr;
      if (o.kind == Kind::Flag) {
        opt = cmd->add_flag(flag_name(key), bool_values[key], o.help);
      } else {
        opt = cmd->add_option(flag_name(key), flag_values[key], o.help)
                  ->type_name(o.kind == Kind::Path ? "PATH" : "VALUE");
      }
      entry.second.emplace_back(key, opt);
    }
  }

  std::vector<const char*> argv{"lingua-screen"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const auto& [sub, options] = registry.at(cmd);
  try {
    Settings settings;
    if (cmd->get_option("--config")->count() > 0) read_config(flag_values["config"], settings);
    for (const auto& [key, opt] : options) {
      if (key == "config" || opt->count() == 0) continue;
      const OptionSpec* spec = find_option(key);
      settings.set(key, spec->kind == Kind::Flag ? std::string(bool_values[key] ? "true" : "false")
                                                 : flag_values[key]);
    }
    return sub->fn(settings, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace lingua
