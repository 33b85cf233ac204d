#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lingua {

enum class Label { Positive, Negative };

/// "patient" / "control"
std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view text);

enum class SentimentLevel { VeryNegative, Negative, Neutral, Positive, VeryPositive };
inline constexpr std::array<SentimentLevel, 5> kSentimentLevels = {
    SentimentLevel::VeryNegative, SentimentLevel::Negative, SentimentLevel::Neutral,
    SentimentLevel::Positive, SentimentLevel::VeryPositive};

/// Accepts "very_negative", "very negative", "VeryNegative" and the like.
std::optional<SentimentLevel> parse_sentiment_level(std::string_view text);
std::string_view sentiment_level_name(SentimentLevel level);

enum class BeliefTag { CB, NCB, ROB, NA };
inline constexpr std::array<BeliefTag, 4> kBeliefTags = {BeliefTag::CB, BeliefTag::NCB,
                                                         BeliefTag::ROB, BeliefTag::NA};
std::optional<BeliefTag> parse_belief_tag(std::string_view text);
std::string_view belief_tag_name(BeliefTag tag);

struct Token {
  std::string surface;
  std::optional<std::string> pos;
  std::optional<std::size_t> head;  // 0 = root, otherwise 1-based index in the sentence
  std::optional<std::string> deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Phrase {
  SentimentLevel level = SentimentLevel::Neutral;
  double intensity = 0.0;  // in [0, 1]

  friend bool operator==(const Phrase&, const Phrase&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::optional<SentimentLevel> sentiment;
  std::vector<Phrase> phrases;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  Label label = Label::Negative;
  std::string raw_text;
  std::vector<Sentence> sentences;
  std::optional<std::vector<std::string>> frames;
  std::optional<std::vector<BeliefTag>> belief_tags;
  bool has_phrase_layer = false;

  std::size_t token_count() const;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::string source;
  std::vector<Document> documents;

  std::size_t count(Label label) const;
  std::vector<Label> labels() const;
  const Document* find(std::string_view id) const;
  /// Documents at `indices`, in the given order.
  Corpus subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Throws ValidationError unless both classes are present.
void require_both_classes(const Corpus& corpus);

// --- Corpus JSONL: {"id", "label", "text"} per line -------------------------

Corpus read_corpus(std::istream& in, std::string name = {});
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

// --- CoNLL-U ----------------------------------------------------------------

enum class PosColumn { Upos, Xpos };

struct ConlluDocument {
  std::string id;
  std::vector<Sentence> sentences;
};

/// Groups sentences by the most recent `# doc_id = <id>` (or `# newdoc id =`)
/// comment. Multiword ranges ("1-2") and empty nodes ("1.1") are skipped.
std::vector<ConlluDocument> parse_conllu(std::istream& in, PosColumn column = PosColumn::Xpos);
void write_conllu(const Corpus& corpus, std::ostream& out);

/// Replaces the sentence layer of each listed document. Unknown ids are rejected.
Corpus attach_conllu(Corpus corpus, const std::vector<ConlluDocument>& parsed);

// --- Annotation sidecar -----------------------------------------------------

/// Sidecar JSONL with optional "frames", "belief" and "sentences" keys. Each
/// present key overwrites that layer; "sentences" aligns by index with the
/// document's sentence list.
Corpus attach_annotations(Corpus corpus, std::istream& sidecar);
Corpus attach_annotations(Corpus corpus, const std::filesystem::path& sidecar);
void write_sidecar(const Corpus& corpus, std::ostream& out);

// --- Annotated store: every layer, one document per line --------------------

void write_store(const Corpus& corpus, std::ostream& out);
Corpus read_store(std::istream& in, std::string name = {});

}  // namespace lingua
