#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lingua/corpus.hpp"

namespace lingua {

// Minimal rule-based annotators so bare text can flow through the pipeline
// when no external annotation files are available.

/// Sentences end at '.', '!' or '?' followed by whitespace (or end of text).
/// Tokens are whitespace-delimited, with leading and trailing punctuation
/// split off one character at a time. Case is preserved.
std::vector<std::vector<std::string>> tokenize(std::string_view text);

/// Tokenizes `raw_text` of every document into its sentence layer.
Corpus tokenize_corpus(Corpus corpus);

using PosLexicon = std::unordered_map<std::string, std::string>;
using SentimentLexicon = std::unordered_map<std::string, double>;

/// "word<TAB>tag" per line. Keys are lowercased.
PosLexicon load_pos_lexicon(const std::filesystem::path& path);
PosLexicon read_pos_lexicon(std::istream& in);
/// "word<TAB>score" per line, score in [-1, 1]. Keys are lowercased.
SentimentLexicon load_sentiment_lexicon(const std::filesystem::path& path);
SentimentLexicon read_sentiment_lexicon(std::istream& in);

/// Lexicon lookup on the lowercased surface, then suffix/shape rules, then NN.
/// A bare lowercase "i" is tagged LS, matching what statistical taggers do with
/// the uncapitalized pronoun.
Sentence fallback_pos_tag(Sentence sentence, const PosLexicon& lexicon);
std::string fallback_tag(std::string_view surface, const PosLexicon& lexicon);

SentimentLevel level_for_score(double score);

struct SentenceSentiment {
  SentimentLevel level = SentimentLevel::Neutral;
  std::vector<Phrase> phrases;
};

/// Each maximal run of lexicon hits is one phrase scored by its mean.
SentenceSentiment lexicon_sentiment(const Sentence& sentence, const SentimentLexicon& lexicon);

}  // namespace lingua
