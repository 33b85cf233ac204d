#include "lingua/topics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "lingua/error.hpp"
#include "lingua/random.hpp"
#include "lingua/util.hpp"

namespace lingua {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lingua-screen/lda/v1";

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
      "both", "but", "by", "could", "did", "do", "does", "doing", "down", "during", "each",
      "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here",
      "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it",
      "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now",
      "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
      "over", "own", "same", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
      "those", "through", "to", "too", "under", "until", "up", "very", "was", "we", "were",
      "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would",
      "you", "your", "yours", "yourself", "yourselves"};
  return words;
}

bool has_alnum(std::string_view word) {
  return std::any_of(word.begin(), word.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

// In-vocabulary word ids of a document, in token order.
std::vector<std::size_t> encode(const TopicModel& model, const Document& doc) {
  std::vector<std::size_t> ids;
  for (const std::string& w : lda_tokens(doc)) {
    if (const auto it = model.index.find(w); it != model.index.end()) ids.push_back(it->second);
  }
  return ids;
}

}  // namespace

void LdaConfig::validate() const {
  if (topics < 1) throw ValidationError("LDA needs at least one topic");
  if (!(beta > 0.0)) throw ValidationError("LDA beta must be positive");
  if (alpha < 0.0) throw ValidationError("LDA alpha must be positive");
  if (iterations <= burn_in) throw ValidationError("LDA iterations must exceed burn-in");
  if (infer_iterations <= infer_burn_in) {
    throw ValidationError("LDA inference iterations must exceed inference burn-in");
  }
}

double TopicModel::phi(std::size_t topic, std::size_t word) const {
  const double v_beta = static_cast<double>(vocab_size()) * config.beta;
  return (static_cast<double>(count(topic, word)) + config.beta) /
         (static_cast<double>(topic_totals[topic]) + v_beta);
}

json TopicModel::to_json() const {
  json counts = json::array();
  for (std::size_t k = 0; k < topic_count(); ++k) {
    json row = json::array();
    for (std::size_t v = 0; v < vocab_size(); ++v) row.push_back(count(k, v));
    counts.push_back(std::move(row));
  }
  return {{"format", kFormat},
          {"config",
           {{"topics", config.topics},
            {"alpha", config.effective_alpha()},
            {"beta", config.beta},
            {"iterations", config.iterations},
            {"burn_in", config.burn_in},
            {"infer_iterations", config.infer_iterations},
            {"infer_burn_in", config.infer_burn_in},
            {"seed", config.seed}}},
          {"vocabulary", vocabulary},
          {"topic_word_counts", std::move(counts)},
          {"topic_totals", topic_totals}};
}

TopicModel TopicModel::from_json(const json& j) {
  if (j.value("format", std::string{}) != kFormat) {
    throw ValidationError("not a topic model file (expected format " + std::string(kFormat) + ")");
  }
  TopicModel m;
  const json& c = j.at("config");
  m.config.topics = c.at("topics").get<std::size_t>();
  m.config.alpha = c.at("alpha").get<double>();
  m.config.beta = c.at("beta").get<double>();
  m.config.iterations = c.at("iterations").get<std::size_t>();
  m.config.burn_in = c.at("burn_in").get<std::size_t>();
  m.config.infer_iterations = c.at("infer_iterations").get<std::size_t>();
  m.config.infer_burn_in = c.at("infer_burn_in").get<std::size_t>();
  m.config.seed = c.at("seed").get<std::uint64_t>();
  m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  for (std::size_t v = 0; v < m.vocabulary.size(); ++v) m.index[m.vocabulary[v]] = v;
  const std::size_t k = m.config.topics;
  m.word_topic.assign(m.vocabulary.size() * k, 0);
  const json& counts = j.at("topic_word_counts");
  if (counts.size() != k) throw ValidationError("topic model count matrix has wrong shape");
  for (std::size_t t = 0; t < k; ++t) {
    if (counts[t].size() != m.vocabulary.size()) {
      throw ValidationError("topic model count matrix has wrong shape");
    }
    for (std::size_t v = 0; v < m.vocabulary.size(); ++v) {
      m.word_topic[v * k + t] = counts[t][v].get<std::int64_t>();
    }
  }
  m.topic_totals = j.at("topic_totals").get<std::vector<std::int64_t>>();
  return m;
}

bool is_stopword(std::string_view lowercase_word) {
  return stopwords().count(std::string(lowercase_word)) > 0;
}

std::vector<std::string> lda_tokens(const Document& doc) {
  std::vector<std::string> out;
  out.reserve(doc.token_count());
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) out.push_back(to_lower(t.surface));
  }
  return out;
}

std::vector<std::string> lda_vocabulary(const Corpus& corpus) {
  std::map<std::string, std::size_t> doc_freq;
  for (const Document& doc : corpus.documents) {
    std::set<std::string> seen;
    for (std::string& w : lda_tokens(doc)) {
      if (has_alnum(w) && !is_stopword(w)) seen.insert(std::move(w));
    }
    for (const std::string& w : seen) ++doc_freq[w];
  }
  std::vector<std::string> vocab;
  for (const auto& [word, df] : doc_freq) {
    if (df >= 2) vocab.push_back(word);
  }
  return vocab;
}

TopicModel train_lda(const Corpus& corpus, const LdaConfig& config,
                     const LdaSweepObserver& observer) {
  config.validate();
  TopicModel model;
  model.config = config;
  model.config.alpha = config.effective_alpha();
  model.vocabulary = lda_vocabulary(corpus);
  if (model.vocabulary.empty()) throw ValidationError("LDA vocabulary is empty");
  for (std::size_t v = 0; v < model.vocabulary.size(); ++v) model.index[model.vocabulary[v]] = v;

  const std::size_t n_topics = config.topics;
  const std::size_t n_words = model.vocabulary.size();
  const std::size_t n_docs = corpus.documents.size();
  std::vector<std::vector<std::size_t>> docs(n_docs);
  std::vector<std::size_t> doc_lengths(n_docs);
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < n_docs; ++d) {
    docs[d] = encode(model, corpus.documents[d]);
    doc_lengths[d] = docs[d].size();
    total_tokens += docs[d].size();
  }
  if (n_topics > total_tokens) {
    throw ValidationError("LDA topic count " + std::to_string(n_topics) + " exceeds the " +
                          std::to_string(total_tokens) + " in-vocabulary tokens");
  }

  const double alpha = model.config.alpha;
  const double beta = config.beta;
  const double v_beta = static_cast<double>(n_words) * beta;
  std::vector<std::int64_t> doc_topic(n_docs * n_topics, 0);
  model.word_topic.assign(n_words * n_topics, 0);
  model.topic_totals.assign(n_topics, 0);
  std::vector<std::vector<std::size_t>> assignment(n_docs);

  Rng rng(config.seed);
  for (std::size_t d = 0; d < n_docs; ++d) {
    assignment[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const std::size_t k = rng.below(n_topics);
      assignment[d][i] = k;
      ++doc_topic[d * n_topics + k];
      ++model.word_topic[docs[d][i] * n_topics + k];
      ++model.topic_totals[k];
    }
  }

  std::vector<double> weights(n_topics);
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::int64_t* nd = &doc_topic[d * n_topics];
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::size_t w = docs[d][i];
        std::int64_t* nw = &model.word_topic[w * n_topics];
        const std::size_t old = assignment[d][i];
        --nd[old];
        --nw[old];
        --model.topic_totals[old];
        double total = 0.0;
        for (std::size_t k = 0; k < n_topics; ++k) {
          total += (static_cast<double>(nd[k]) + alpha) * (static_cast<double>(nw[k]) + beta) /
                   (static_cast<double>(model.topic_totals[k]) + v_beta);
          weights[k] = total;
        }
        const double target = rng.uniform() * total;
        std::size_t k = 0;
        while (k + 1 < n_topics && weights[k] <= target) ++k;
        assignment[d][i] = k;
        ++nd[k];
        ++nw[k];
        ++model.topic_totals[k];
      }
    }
    if (observer) {
      observer(LdaSweepState{sweep, n_topics, doc_topic, doc_lengths, model.topic_totals,
                             model.word_topic});
    }
  }
  return model;
}

ThetaEstimate infer_theta(const TopicModel& model, const Document& doc, std::uint64_t seed) {
  const std::size_t n_topics = model.topic_count();
  ThetaEstimate result;
  const std::vector<std::size_t> words = encode(model, doc);
  if (words.empty()) {
    result.theta.assign(n_topics, 1.0 / static_cast<double>(n_topics));
    result.uniform_fallback = true;
    return result;
  }
  const double alpha = model.config.effective_alpha();
  const double beta = model.config.beta;
  const double v_beta = static_cast<double>(model.vocab_size()) * beta;
  const double n_d = static_cast<double>(words.size());

  // Frozen topic-word factor for each distinct word.
  std::vector<double> phi_cache(words.size() * n_topics);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t k = 0; k < n_topics; ++k) {
      phi_cache[i * n_topics + k] =
          (static_cast<double>(model.count(k, words[i])) + beta) /
          (static_cast<double>(model.topic_totals[k]) + v_beta);
    }
  }

  Rng rng(seed);
  std::vector<std::int64_t> nd(n_topics, 0);
  std::vector<std::size_t> z(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = rng.below(n_topics);
    ++nd[z[i]];
  }
  std::vector<double> weights(n_topics);
  std::vector<double> accum(n_topics, 0.0);
  std::size_t samples = 0;
  const LdaConfig& cfg = model.config;
  for (std::size_t sweep = 0; sweep < cfg.infer_iterations; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --nd[z[i]];
      double total = 0.0;
      for (std::size_t k = 0; k < n_topics; ++k) {
        total += (static_cast<double>(nd[k]) + alpha) * phi_cache[i * n_topics + k];
        weights[k] = total;
      }
      const double target = rng.uniform() * total;
      std::size_t k = 0;
      while (k + 1 < n_topics && weights[k] <= target) ++k;
      z[i] = k;
      ++nd[k];
    }
    if (sweep >= cfg.infer_burn_in) {
      for (std::size_t k = 0; k < n_topics; ++k) {
        accum[k] += (static_cast<double>(nd[k]) + alpha) / (n_d + static_cast<double>(n_topics) * alpha);
      }
      ++samples;
    }
  }
  result.theta.resize(n_topics);
  double sum = 0.0;
  for (std::size_t k = 0; k < n_topics; ++k) {
    result.theta[k] = accum[k] / static_cast<double>(samples);
    sum += result.theta[k];
  }
  for (double& t : result.theta) t /= sum;
  return result;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic,
                                                      std::size_t n) {
  if (topic >= model.topic_count()) {
    throw ValidationError("topic " + std::to_string(topic) + " out of range (K = " +
                          std::to_string(model.topic_count()) + ")");
  }
  std::vector<std::size_t> order(model.vocab_size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> probs(model.vocab_size());
  for (std::size_t v = 0; v < probs.size(); ++v) probs[v] = model.phi(topic, v);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return model.vocabulary[a] < model.vocabulary[b];
  });
  order.resize(std::min(n, order.size()));
  std::vector<std::pair<std::string, double>> out;
  out.reserve(order.size());
  for (std::size_t v : order) out.emplace_back(model.vocabulary[v], probs[v]);
  return out;
}

}  // namespace lingua
