#include "lingua/synth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "lingua/error.hpp"
#include "lingua/random.hpp"
#include "lingua/util.hpp"

namespace lingua {

namespace {

// Multiplier applied to a class's marked items in its skewed distribution.
constexpr double kSkew = 4.0;

struct Item {
  const char* name;
  double weight;
  int mark;  // +1 over-used by patients, -1 by controls, 0 neutral
};

const std::vector<Item> kPosTags = {
    {"NN", 12, -1}, {"NNS", 5, -1}, {"NNP", 3, -1}, {"VB", 5, 0},   {"VBD", 5, -1}, {"VBG", 3, 0},
    {"VBZ", 3, 0},  {"VBP", 4, 1},  {"JJ", 6, -1},  {"RB", 5, 1},   {"PRP", 7, 1},  {"DT", 8, -1},
    {"IN", 9, -1},  {"CC", 3, -1},  {"MD", 2, 1},   {"TO", 2, 0},   {"CD", 1, 1},   {"RP", 1.5, 1},
    {"FW", 1, 1},   {"LS", 1.5, 1}, {"UH", 0.5, 1},
};

const std::vector<Item> kRelations = {
    {"nsubj", 8, 0},  {"dobj", 5, 0},   {"advmod", 4, 1},   {"amod", 5, -1},  {"det", 7, -1},
    {"prep", 6, -1},  {"pobj", 6, -1},  {"aux", 3, 1},      {"cc", 2, -1},    {"conj", 2, -1},
    {"compound", 3, -1}, {"mark", 2, 1}, {"neg", 1, 1},     {"nmod", 3, -1},  {"xcomp", 2, 1},
    {"ccomp", 1.5, 1}, {"prt", 1, 1},   {"discourse", 0.5, 1},
};

const std::vector<Item> kFrames = {
    {"Quantity", 4, -1},          {"Social_event", 3, -1},        {"Calendric_unit", 4, -1},
    {"People", 4, 0},             {"Locative_relation", 3, -1},   {"Desiring", 2, 1},
    {"Emotion_directed", 2, 1},   {"Statement", 3, 0},            {"Motion", 3, -1},
    {"Intentionally_act", 2, 0},  {"Morality_evaluation", 1.5, 1}, {"Catastrophe", 1, 1},
    {"Manipulate_into_doing", 0.8, 1}, {"Being_obligated", 1.5, 1}, {"Religious_belief", 1, 1},
    {"Leisure", 2, -1},
};

const std::vector<Item> kLevels = {
    {"very_negative", 0.08, 1}, {"negative", 0.2, 1}, {"neutral", 0.44, 0},
    {"positive", 0.2, -1},      {"very_positive", 0.08, -1},
};

const std::vector<Item> kBeliefs = {{"CB", 0.35, 1}, {"NCB", 0.25, -1}, {"ROB", 0.2, -1}, {"NA", 0.2, 0}};

const std::vector<const char*> kFunctionWords = {"the", "and", "to", "my", "i", "it",
                                                 "was", "of", "a", "in", "that", "is"};

std::vector<double> normalized(std::vector<double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

// Class-conditional distribution over items.
std::vector<double> class_distribution(const std::vector<Item>& items, Label label, double strength) {
  std::vector<double> base;
  std::vector<double> skew;
  const int favoured = label == Label::Positive ? 1 : -1;
  for (const Item& it : items) {
    base.push_back(it.weight);
    skew.push_back(it.weight * (it.mark == favoured ? kSkew : 1.0));
  }
  base = normalized(std::move(base));
  skew = normalized(std::move(skew));
  std::vector<double> out(items.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - strength) * base[i] + strength * skew[i];
  return out;
}

std::vector<double> group_distribution(std::size_t groups, Label label, double strength) {
  std::vector<Item> items;
  for (std::size_t g = 0; g < groups; ++g) items.push_back({"", 1.0, g < groups / 2 ? 1 : -1});
  return class_distribution(items, label, strength);
}

std::string syllable(std::size_t n) {
  static constexpr char kConsonants[] = "bdfgklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  return {kConsonants[(n / 5) % 14], kVowels[n % 5]};
}

double intensity_for(std::size_t level, Rng& rng) {
  switch (level) {
    case 0:
    case 4: return rng.uniform(0.6, 1.0);
    case 1:
    case 3: return rng.uniform(0.3, 0.7);
    default: return rng.uniform(0.0, 0.2);
  }
}

Document make_document(const SynthConfig& cfg, Label label, std::string id, Rng& rng) {
  Document doc;
  doc.id = std::move(id);
  doc.label = label;

  const auto pos_dist = class_distribution(kPosTags, label, cfg.tag_strength);
  const auto rel_dist = class_distribution(kRelations, label, cfg.tag_strength);
  const auto frame_dist = class_distribution(kFrames, label, cfg.tag_strength);
  const auto level_dist = class_distribution(kLevels, label, cfg.sentiment_strength);
  const auto belief_dist = class_distribution(kBeliefs, label, cfg.belief_strength);

  // Per-document jitter on the word-group mixture gives topics something to find.
  auto groups = group_distribution(cfg.word_groups, label, cfg.topic_strength);
  for (double& g : groups) g *= std::exp(0.5 * rng.normal());

  const std::size_t target = cfg.min_tokens + rng.below(cfg.max_tokens - cfg.min_tokens + 1);
  std::size_t produced = 0;
  std::vector<std::string> beliefs;
  while (produced < target) {
    const std::size_t len = std::min<std::size_t>(6 + rng.below(9), target - produced);
    produced += len;
    Sentence s;
    for (std::size_t i = 0; i < len; ++i) {
      Token t;
      if (rng.uniform() < 0.25) {
        t.surface = kFunctionWords[rng.below(kFunctionWords.size())];
      } else {
        const std::size_t g = rng.categorical(groups);
        t.surface = synth_word(g, rng.below(cfg.words_per_group), cfg.words_per_group);
      }
      t.pos = kPosTags[rng.categorical(pos_dist)].name;
      s.tokens.push_back(std::move(t));
    }
    s.tokens.push_back(Token{".", ".", {}, {}});

    // Random dependency tree over the words; the period hangs off the root.
    const std::size_t root = rng.below(len);
    std::vector<std::size_t> attached{root};
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < len; ++i) {
      if (i != root) pending.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(pending));
    s.tokens[root].head = 0;
    s.tokens[root].deprel = "root";
    for (std::size_t i : pending) {
      s.tokens[i].head = attached[rng.below(attached.size())] + 1;
      s.tokens[i].deprel = kRelations[rng.categorical(rel_dist)].name;
      attached.push_back(i);
    }
    s.tokens.back().head = root + 1;
    s.tokens.back().deprel = "punct";

    s.sentiment = parse_sentiment_level(kLevels[rng.categorical(level_dist)].name);
    const std::size_t phrases = 1 + rng.below(3);
    for (std::size_t p = 0; p < phrases; ++p) {
      const std::size_t level = rng.categorical(level_dist);
      s.phrases.push_back({kSentimentLevels[level], intensity_for(level, rng)});
    }
    const std::size_t tags = 1 + rng.below(2);
    for (std::size_t b = 0; b < tags; ++b) beliefs.push_back(kBeliefs[rng.categorical(belief_dist)].name);
    doc.sentences.push_back(std::move(s));
  }
  doc.has_phrase_layer = true;

  std::vector<std::string> frames;
  const std::size_t n_frames = std::max<std::size_t>(1, produced / 5);
  for (std::size_t f = 0; f < n_frames; ++f) frames.emplace_back(kFrames[rng.categorical(frame_dist)].name);
  doc.frames = std::move(frames);
  std::vector<BeliefTag> tags;
  for (const std::string& b : beliefs) tags.push_back(*parse_belief_tag(b));
  doc.belief_tags = std::move(tags);

  for (const Sentence& s : doc.sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const std::string& w = s.tokens[i].surface;
      if (w == ".") {
        doc.raw_text += ".";
        continue;
      }
      if (!doc.raw_text.empty()) doc.raw_text += ' ';
      doc.raw_text += w;
    }
  }
  return doc;
}

}  // namespace

void SynthConfig::validate() const {
  for (double s : {tag_strength, topic_strength, sentiment_strength, belief_strength}) {
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("marker strength must lie in [0, 1]");
  }
  if (docs_per_class == 0) throw ValidationError("need at least one document per class");
  if (min_tokens == 0 || max_tokens < min_tokens) throw ValidationError("invalid document length range");
  if (word_groups < 2 || words_per_group == 0) throw ValidationError("need at least two word groups");
  if (vector_dimension == 0) throw ValidationError("vector dimension must be positive");
}

std::string synth_word(std::size_t group, std::size_t index, std::size_t words_per_group) {
  const std::size_t n = (group * words_per_group + index) * 37 + 11;
  return syllable(group % 70) + syllable((n / 70) % 70) + syllable(n % 70);
}

Corpus synth_corpus(const SynthConfig& config) {
  config.validate();
  Corpus corpus{"synthetic", "synth", {}};
  Rng rng(config.seed);
  for (std::size_t i = 0; i < config.docs_per_class; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "p%04zu", i + 1);
    corpus.documents.push_back(make_document(config, Label::Positive, id, rng));
    std::snprintf(id, sizeof(id), "c%04zu", i + 1);
    corpus.documents.push_back(make_document(config, Label::Negative, id, rng));
  }
  return corpus;
}

VectorTable synth_vectors(const SynthConfig& config) {
  config.validate();
  const std::size_t dim = config.vector_dimension;
  Rng rng(config.seed ^ 0x5EC7085ULL);
  VectorTable table(dim);
  std::vector<double> center(dim);
  std::vector<double> v(dim);
  const auto normalize = [](std::vector<double>& x) {
    double norm = 0.0;
    for (double c : x) norm += c * c;
    norm = std::sqrt(norm);
    for (double& c : x) c /= norm;
  };
  for (std::size_t g = 0; g < config.word_groups; ++g) {
    for (double& c : center) c = rng.normal();
    normalize(center);
    for (std::size_t j = 0; j < config.words_per_group; ++j) {
      for (std::size_t d = 0; d < dim; ++d) v[d] = center[d] + 0.25 * rng.normal() / std::sqrt(static_cast<double>(dim));
      normalize(v);
      table.add(synth_word(g, j, config.words_per_group), v);
    }
  }
  for (const char* w : kFunctionWords) {
    for (double& c : v) c = rng.normal();
    normalize(v);
    table.add(w, v);
  }
  return table;
}

void write_vectors(const VectorTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.word(i);
    for (double c : table.vector(i)) out << ' ' << format_double(c);
    out << '\n';
  }
}

}  // namespace lingua
