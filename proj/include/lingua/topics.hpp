#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lingua/corpus.hpp"

namespace lingua {

struct LdaConfig {
  std::size_t topics = 20;
  double alpha = 0.0;  // per-topic prior; 0 selects 5/topics
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::size_t infer_iterations = 200;
  std::size_t infer_burn_in = 50;
  std::uint64_t seed = 1;

  double effective_alpha() const { return alpha > 0.0 ? alpha : 5.0 / static_cast<double>(topics); }
  void validate() const;
};

struct TopicModel {
  std::vector<std::string> vocabulary;  // sorted
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::int64_t> word_topic;  // V x K, row-major by word
  std::vector<std::int64_t> topic_totals;
  LdaConfig config;

  std::size_t topic_count() const { return config.topics; }
  std::size_t vocab_size() const { return vocabulary.size(); }
  std::int64_t count(std::size_t topic, std::size_t word) const {
    return word_topic[word * config.topics + topic];
  }
  /// Smoothed topic-word probability.
  double phi(std::size_t topic, std::size_t word) const;

  nlohmann::json to_json() const;
  static TopicModel from_json(const nlohmann::json& j);
};

/// Sampler state handed to an observer after every training sweep.
struct LdaSweepState {
  std::size_t sweep = 0;
  std::size_t topics = 0;
  std::span<const std::int64_t> doc_topic;  // D x K
  std::span<const std::size_t> doc_lengths;
  std::span<const std::int64_t> topic_totals;
  std::span<const std::int64_t> word_topic;  // V x K
};
using LdaSweepObserver = std::function<void(const LdaSweepState&)>;

bool is_stopword(std::string_view lowercase_word);

/// Lowercased token surfaces of a document.
std::vector<std::string> lda_tokens(const Document& doc);

/// Lowercased tokens with at least one alphanumeric character, minus
/// stopwords, kept when they occur in at least two documents. Sorted.
std::vector<std::string> lda_vocabulary(const Corpus& corpus);

/// Collapsed Gibbs sampling. Deterministic for a fixed seed.
TopicModel train_lda(const Corpus& corpus, const LdaConfig& config,
                     const LdaSweepObserver& observer = {});

struct ThetaEstimate {
  std::vector<double> theta;
  bool uniform_fallback = false;  // document had no in-vocabulary tokens
};

/// Gibbs sampling over the document's tokens with the topic-word counts
/// frozen; theta averaged over post-burn-in sweeps.
ThetaEstimate infer_theta(const TopicModel& model, const Document& doc, std::uint64_t seed);

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic,
                                                      std::size_t n);

}  // namespace lingua
