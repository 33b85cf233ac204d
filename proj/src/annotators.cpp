#include "lingua/annotators.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>

#include "lingua/error.hpp"
#include "lingua/util.hpp"

namespace lingua {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

void split_word(std::string_view word, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && is_punct(word[begin])) ++begin;
  if (begin == end) {
    out.emplace_back(word);  // all punctuation: keep as one token
    return;
  }
  while (end > begin && is_punct(word[end - 1])) --end;
  for (std::size_t i = 0; i < begin; ++i) out.emplace_back(1, word[i]);
  out.emplace_back(word.substr(begin, end - begin));
  for (std::size_t i = end; i < word.size(); ++i) out.emplace_back(1, word[i]);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

template <typename Value, typename Parse>
std::unordered_map<std::string, Value> read_tsv_lexicon(std::istream& in, Parse parse) {
  std::unordered_map<std::string, Value> lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ValidationError("lexicon line " + std::to_string(line_no) + " is not 'word<TAB>value'");
    }
    lexicon.emplace(to_lower(line.substr(0, tab)),
                    parse(std::string(trim(line.substr(tab + 1))), line_no));
  }
  return lexicon;
}

}  // namespace

std::vector<std::vector<std::string>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    const std::string_view word = text.substr(i, j - i);
    split_word(word, current);
    const char last = word.back();
    if (last == '.' || last == '!' || last == '?') {
      sentences.push_back(std::move(current));
      current.clear();
    }
    i = j;
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

Corpus tokenize_corpus(Corpus corpus) {
  for (Document& doc : corpus.documents) {
    doc.sentences.clear();
    for (auto& words : tokenize(doc.raw_text)) {
      Sentence s;
      for (auto& w : words) s.tokens.push_back(Token{std::move(w), {}, {}, {}});
      doc.sentences.push_back(std::move(s));
    }
  }
  return corpus;
}

PosLexicon read_pos_lexicon(std::istream& in) {
  return read_tsv_lexicon<std::string>(in, [](std::string v, std::size_t line_no) {
    if (v.empty()) throw ValidationError("empty tag at lexicon line " + std::to_string(line_no));
    return v;
  });
}

PosLexicon load_pos_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon " + path.string());
  return read_pos_lexicon(in);
}

SentimentLexicon read_sentiment_lexicon(std::istream& in) {
  return read_tsv_lexicon<double>(in, [](const std::string& v, std::size_t line_no) {
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("non-numeric score at lexicon line " + std::to_string(line_no));
    }
    if (!(score >= -1.0 && score <= 1.0)) {
      throw ValidationError("score outside [-1,1] at lexicon line " + std::to_string(line_no));
    }
    return score;
  });
}

SentimentLexicon load_sentiment_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon " + path.string());
  return read_sentiment_lexicon(in);
}

std::string fallback_tag(std::string_view surface, const PosLexicon& lexicon) {
  if (surface == "i") return "LS";
  const std::string lower = to_lower(surface);
  if (const auto it = lexicon.find(lower); it != lexicon.end()) return it->second;
  if (ends_with(lower, "ly")) return "RB";
  if (ends_with(lower, "ing")) return "VBG";
  if (ends_with(lower, "ed")) return "VBD";
  if (!surface.empty() && std::isupper(static_cast<unsigned char>(surface.front()))) return "NNP";
  bool digits = !surface.empty();
  bool punct = !surface.empty();
  for (char c : surface) {
    digits = digits && std::isdigit(static_cast<unsigned char>(c));
    punct = punct && is_punct(c);
  }
  if (digits) return "CD";
  if (punct) return "PUNCT";
  return "NN";
}

Sentence fallback_pos_tag(Sentence sentence, const PosLexicon& lexicon) {
  for (Token& tok : sentence.tokens) tok.pos = fallback_tag(tok.surface, lexicon);
  return sentence;
}

SentimentLevel level_for_score(double score) {
  if (score < -0.6) return SentimentLevel::VeryNegative;
  if (score < -0.2) return SentimentLevel::Negative;
  if (score <= 0.2) return SentimentLevel::Neutral;
  if (score <= 0.6) return SentimentLevel::Positive;
  return SentimentLevel::VeryPositive;
}

SentenceSentiment lexicon_sentiment(const Sentence& sentence, const SentimentLexicon& lexicon) {
  SentenceSentiment result;
  double score_sum = 0.0;
  std::size_t run = 0;
  double phrase_total = 0.0;
  const auto close_run = [&] {
    if (run == 0) return;
    const double score = score_sum / static_cast<double>(run);
    result.phrases.push_back({level_for_score(score), std::abs(score)});
    phrase_total += score;
    score_sum = 0.0;
    run = 0;
  };
  for (const Token& tok : sentence.tokens) {
    const auto it = lexicon.find(to_lower(tok.surface));
    if (it == lexicon.end()) {
      close_run();
      continue;
    }
    score_sum += it->second;
    ++run;
  }
  close_run();
  if (!result.phrases.empty()) {
    result.level = level_for_score(phrase_total / static_cast<double>(result.phrases.size()));
  }
  return result;
}

}  // namespace lingua
