#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "lingua/annotators.hpp"
#include "lingua/error.hpp"

using namespace lingua;
using Sentences = std::vector<std::vector<std::string>>;

TEST_SUITE("annotators") {

TEST_CASE("tokenize splits sentences and peels punctuation") {
  CHECK(tokenize("I sing. You dance.") == Sentences{{"I", "sing", "."}, {"You", "dance", "."}});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \n\t ").empty());
  CHECK(tokenize("don't stop") == Sentences{{"don't", "stop"}});
  CHECK(tokenize("Really?! (yes), \"fine\"") ==
        Sentences{{"Really", "?", "!"}, {"(", "yes", ")", ",", "\"", "fine", "\""}});
  CHECK(tokenize("3.14 is pi") == Sentences{{"3.14", "is", "pi"}});
  CHECK(tokenize("wait ... what") == Sentences{{"wait", "..."}, {"what"}});
}

TEST_CASE("tokenize does not lowercase") {
  CHECK(tokenize("HELLO World")[0] == std::vector<std::string>{"HELLO", "World"});
}

TEST_CASE("fallback tagger rules") {
  PosLexicon lex{{"sing", "VB"}, {"quickly", "JJ"}};
  Sentence s;
  s.tokens = {fixtures::tok("i"), fixtures::tok("sing")};
  const Sentence tagged = fallback_pos_tag(s, lex);
  CHECK(*tagged.tokens[0].pos == "LS");
  CHECK(*tagged.tokens[1].pos == "VB");

  const PosLexicon empty;
  CHECK(fallback_tag("quickly", empty) == "RB");
  CHECK(fallback_tag("quickly", lex) == "JJ");
  CHECK(fallback_tag("Sing", lex) == "VB");
  CHECK(fallback_tag("running", empty) == "VBG");
  CHECK(fallback_tag("walked", empty) == "VBD");
  CHECK(fallback_tag("Paris", empty) == "NNP");
  CHECK(fallback_tag("1984", empty) == "CD");
  CHECK(fallback_tag("table", empty) == "NN");
  CHECK(fallback_tag("I", empty) == "NNP");
}

TEST_CASE("fallback tagger is total and deterministic") {
  Sentence s;
  for (const char* w : {"i", "x", "!!", "Zed", "42", "going", "", "ended"}) {
    if (*w) s.tokens.push_back(fixtures::tok(w));
  }
  const Sentence a = fallback_pos_tag(s, {});
  const Sentence b = fallback_pos_tag(s, {});
  CHECK(a == b);
  for (const Token& t : a.tokens) {
    REQUIRE(t.pos);
    CHECK_FALSE(t.pos->empty());
  }
}

TEST_CASE("lexicon files") {
  std::istringstream pos("Sing\tVB\n\nrun\tVB\n");
  const PosLexicon p = read_pos_lexicon(pos);
  CHECK(p.at("sing") == "VB");
  std::istringstream scores("hate\t-0.8\nlove\t0.7\n");
  const SentimentLexicon s = read_sentiment_lexicon(scores);
  CHECK(s.at("hate") == doctest::Approx(-0.8));
  std::istringstream bad("hate\tvery\n");
  CHECK_THROWS_AS(read_sentiment_lexicon(bad), ValidationError);
  std::istringstream range("hate\t-2\n");
  CHECK_THROWS_AS(read_sentiment_lexicon(range), ValidationError);
}

TEST_CASE("lexicon sentiment examples") {
  Sentence s;
  s.tokens = {fixtures::tok("i"), fixtures::tok("hate"), fixtures::tok("this")};
  SentenceSentiment r = lexicon_sentiment(s, {{"hate", -0.8}});
  REQUIRE(r.phrases.size() == 1);
  CHECK(r.phrases[0].level == SentimentLevel::VeryNegative);
  CHECK(r.phrases[0].intensity == doctest::Approx(0.8));
  CHECK(r.level == SentimentLevel::VeryNegative);

  r = lexicon_sentiment(s, {});
  CHECK(r.phrases.empty());
  CHECK(r.level == SentimentLevel::Neutral);

  Sentence two;
  two.tokens = {fixtures::tok("love"), fixtures::tok("is"), fixtures::tok("bad")};
  r = lexicon_sentiment(two, {{"love", 0.7}, {"bad", -0.7}});
  REQUIRE(r.phrases.size() == 2);
  CHECK(r.phrases[0].level == SentimentLevel::VeryPositive);
  CHECK(r.phrases[0].intensity == doctest::Approx(0.7));
  CHECK(r.phrases[1].level == SentimentLevel::VeryNegative);
  CHECK(r.level == SentimentLevel::Neutral);

  Sentence run;
  run.tokens = {fixtures::tok("very"), fixtures::tok("Good")};
  r = lexicon_sentiment(run, {{"very", 0.2}, {"good", 0.6}});
  REQUIRE(r.phrases.size() == 1);
  CHECK(r.phrases[0].intensity == doctest::Approx(0.4));
  CHECK(r.phrases[0].level == SentimentLevel::Positive);
}

TEST_CASE("level thresholds") {
  CHECK(level_for_score(-0.61) == SentimentLevel::VeryNegative);
  CHECK(level_for_score(-0.6) == SentimentLevel::Negative);
  CHECK(level_for_score(-0.2) == SentimentLevel::Neutral);
  CHECK(level_for_score(0.2) == SentimentLevel::Neutral);
  CHECK(level_for_score(0.21) == SentimentLevel::Positive);
  CHECK(level_for_score(0.6) == SentimentLevel::Positive);
  CHECK(level_for_score(0.61) == SentimentLevel::VeryPositive);
}

TEST_CASE("lexicon sentiment properties on random sentences") {
  Rng rng(11);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  SentimentLexicon lex;
  for (std::size_t i = 0; i < 4; ++i) lex[words[i]] = rng.uniform(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    Sentence s;
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) s.tokens.push_back(fixtures::tok(words[rng.below(words.size())]));
    const SentenceSentiment r = lexicon_sentiment(s, lex);
    double mean = 0.0;
    for (const Phrase& p : r.phrases) {
      CHECK(p.intensity >= 0.0);
      CHECK(p.intensity <= 1.0);
      CHECK(level_for_score(p.level <= SentimentLevel::Negative ? -p.intensity : p.intensity) == p.level);
    }
    // Recompute phrase scores independently to check the sentence level.
    std::vector<double> scores;
    double sum = 0.0;
    std::size_t len = 0;
    for (const Token& t : s.tokens) {
      const auto it = lex.find(t.surface);
      if (it != lex.end()) {
        sum += it->second;
        ++len;
        continue;
      }
      if (len) scores.push_back(sum / static_cast<double>(len));
      sum = 0.0;
      len = 0;
    }
    if (len) scores.push_back(sum / static_cast<double>(len));
    REQUIRE(scores.size() == r.phrases.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      CHECK(r.phrases[i].intensity == doctest::Approx(std::abs(scores[i])).epsilon(1e-12));
      mean += scores[i];
    }
    if (!scores.empty()) mean /= static_cast<double>(scores.size());
    const bool neutral = scores.empty() || (mean >= -0.2 && mean <= 0.2);
    CHECK(neutral == (r.level == SentimentLevel::Neutral));
  }
}

}  // TEST_SUITE
