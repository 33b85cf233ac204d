#include <doctest.h>

#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "lingua/corpus.hpp"
#include "lingua/error.hpp"
#include "lingua/synth.hpp"

using namespace lingua;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("jsonl with two records") {
  std::istringstream in(R"({"id":"a","label":"patient","text":"I sing."}
{"id":"b","label":"control","text":"You dance."}
)");
  const Corpus c = read_corpus(in, "tiny");
  REQUIRE(c.documents.size() == 2);
  CHECK(c.documents[0].id == "a");
  CHECK(c.documents[0].label == Label::Positive);
  CHECK(c.documents[1].label == Label::Negative);
  CHECK(c.documents[1].raw_text == "You dance.");
  CHECK(c.documents[0].sentences.empty());
  CHECK_FALSE(c.documents[0].frames);
  CHECK(c.count(Label::Positive) == 1);
  CHECK(c.find("b") == &c.documents[1]);
  CHECK(c.find("z") == nullptr);
}

TEST_CASE("unknown label names the line") {
  std::istringstream in("{\"id\":\"a\",\"label\":\"patient\",\"text\":\"x\"}\n"
                        "{\"id\":\"b\",\"label\":\"unknown\",\"text\":\"y\"}\n");
  CHECK(error_of([&] { read_corpus(in); }) == "invalid label at line 2");
}

TEST_CASE("malformed and duplicate records") {
  std::istringstream broken("{\"id\":\"a\",\"label\":\"patient\",\"text\":\"x\"}\n{oops\n");
  CHECK(error_of([&] { read_corpus(broken); }).find("line 2") != std::string::npos);
  std::istringstream missing("{\"id\":\"a\",\"label\":\"patient\"}\n");
  CHECK(error_of([&] { read_corpus(missing); }).find("line 1") != std::string::npos);
  std::istringstream dup("{\"id\":\"a\",\"label\":\"patient\",\"text\":\"x\"}\n"
                         "{\"id\":\"a\",\"label\":\"control\",\"text\":\"y\"}\n");
  CHECK(error_of([&] { read_corpus(dup); }).find("duplicate id 'a'") != std::string::npos);
}

TEST_CASE("373 records keep their label counts") {
  std::ostringstream out;
  for (int i = 0; i < 373; ++i) {
    out << "{\"id\":\"d" << i << "\",\"label\":\"" << (i < 190 ? "patient" : "control")
        << "\",\"text\":\"t\"}\n";
  }
  std::istringstream in(out.str());
  const Corpus c = read_corpus(in);
  CHECK(c.documents.size() == 373);
  CHECK(c.count(Label::Positive) == 190);
  CHECK(c.count(Label::Negative) == 183);
}

TEST_CASE("jsonl round trip is field for field") {
  const std::string text =
      "{\"id\":\"a\",\"label\":\"patient\",\"text\":\"caf\\u00e9 \\\"quoted\\\"\\nline\"}\n"
      "{\"id\":\"b\",\"label\":\"control\",\"text\":\"\"}\n";
  std::istringstream in(text);
  const Corpus c = read_corpus(in);
  std::ostringstream out;
  write_corpus(c, out);
  std::istringstream again(out.str());
  const Corpus d = read_corpus(again);
  CHECK(c.documents == d.documents);
  CHECK(c.documents[0].raw_text == "caf\xc3\xa9 \"quoted\"\nline");
}

TEST_CASE("both classes are required") {
  Corpus c;
  c.documents.push_back(fixtures::words_doc("a", Label::Positive, {{"x"}}));
  CHECK_THROWS_AS(require_both_classes(c), ValidationError);
  c.documents.push_back(fixtures::words_doc("b", Label::Negative, {{"y"}}));
  CHECK_NOTHROW(require_both_classes(c));
}

TEST_CASE("conllu: I sing") {
  std::istringstream in("# doc_id = a\n"
                        "1\tI\ti\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n"
                        "2\tsing\tsing\tVERB\tVBP\t_\t0\troot\t_\t_\n\n");
  const auto docs = parse_conllu(in);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == "a");
  REQUIRE(docs[0].sentences.size() == 1);
  const auto& toks = docs[0].sentences[0].tokens;
  REQUIRE(toks.size() == 2);
  CHECK(*toks[0].pos == "PRP");
  CHECK(*toks[1].pos == "VBP");
  CHECK(*toks[0].head == 2);
  CHECK(*toks[1].head == 0);
  CHECK(*toks[1].deprel == "root");

  std::istringstream upos("# doc_id = a\n1\tI\ti\tPRON\tPRP\t_\t0\troot\t_\t_\n");
  CHECK(*parse_conllu(upos, PosColumn::Upos)[0].sentences[0].tokens[0].pos == "PRON");
}

TEST_CASE("conllu: nine columns is an error with line number") {
  std::istringstream in("# doc_id = a\n1\tI\ti\tPRON\tPRP\t_\t0\troot\t_\n");
  CHECK(error_of([&] { parse_conllu(in); }).find("line 2") != std::string::npos);
}

TEST_CASE("conllu: head out of range and self loops") {
  std::istringstream far("# doc_id = a\n1\tI\t_\t_\tPRP\t_\t5\tnsubj\t_\t_\n");
  CHECK(error_of([&] { parse_conllu(far); }).find("out of range") != std::string::npos);
  std::istringstream self("# doc_id = a\n1\tI\t_\t_\tPRP\t_\t0\troot\t_\t_\n2\tx\t_\t_\tNN\t_\t2\tdep\t_\t_\n");
  CHECK_THROWS_AS(parse_conllu(self), ValidationError);
}

TEST_CASE("conllu: ranges and empty nodes are skipped, sentences keep order") {
  std::istringstream in("# newdoc id = d\n"
                        "# text = first\n"
                        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
                        "1\tdo\t_\t_\tVB\t_\t0\troot\t_\t_\n"
                        "2\tn't\t_\t_\tRB\t_\t1\tneg\t_\t_\n"
                        "2.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\n\n"
                        "1\tsecond\t_\t_\tNN\t_\t0\troot\t_\t_\n\n"
                        "1\tthird\t_\t_\tNN\t_\t0\troot\t_\t_\n"
                        "2\tone\t_\t_\tCD\t_\t1\tnummod\t_\t_\n");
  const auto docs = parse_conllu(in);
  REQUIRE(docs.size() == 1);
  REQUIRE(docs[0].sentences.size() == 3);
  CHECK(docs[0].sentences[0].tokens.size() == 2);
  CHECK(docs[0].sentences[0].tokens[1].surface == "n't");
  CHECK(docs[0].sentences[1].tokens[0].surface == "second");
  CHECK(docs[0].sentences[2].tokens.size() == 2);
}

TEST_CASE("conllu round trip preserves tokens, heads and relations") {
  SynthConfig cfg;
  cfg.docs_per_class = 4;
  const Corpus c = synth_corpus(cfg);
  std::ostringstream out;
  write_conllu(c, out);
  std::istringstream in(out.str());
  const auto parsed = parse_conllu(in);
  REQUIRE(parsed.size() == c.documents.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].id == c.documents[i].id);
    REQUIRE(parsed[i].sentences.size() == c.documents[i].sentences.size());
    for (std::size_t s = 0; s < parsed[i].sentences.size(); ++s) {
      const auto& a = parsed[i].sentences[s].tokens;
      const auto& b = c.documents[i].sentences[s].tokens;
      REQUIRE(a.size() == b.size());
      for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].surface == b[t].surface);
        CHECK(a[t].pos == b[t].pos);
        CHECK(a[t].head == b[t].head);
        CHECK(a[t].deprel == b[t].deprel);
      }
    }
  }
}

TEST_CASE("attach_conllu rejects unknown documents") {
  Corpus c;
  c.documents.push_back(fixtures::words_doc("a", Label::Positive, {}));
  std::vector<ConlluDocument> parsed{{"zzz", {}}};
  CHECK_THROWS_AS(attach_conllu(c, parsed), ValidationError);
}

TEST_CASE("sidecar layers") {
  Corpus c;
  c.documents.push_back(fixtures::words_doc("a", Label::Positive, {{"i", "sing"}, {"you", "dance"}}));
  c.documents.push_back(fixtures::words_doc("b", Label::Negative, {{"hi"}}));

  SUBCASE("belief multiset") {
    std::istringstream in(R"({"id":"a","belief":["CB","NA"]})");
    const Corpus out = attach_annotations(c, in);
    const auto& tags = *out.documents[0].belief_tags;
    std::map<BeliefTag, int> counts;
    for (BeliefTag t : tags) ++counts[t];
    CHECK(counts[BeliefTag::CB] == 1);
    CHECK(counts[BeliefTag::NA] == 1);
    CHECK(tags.size() == 2);
    CHECK_FALSE(out.documents[1].belief_tags);
  }
  SUBCASE("frames") {
    std::istringstream in(R"({"id":"a","frames":["Quantity","Social_event"]})");
    CHECK(attach_annotations(c, in).documents[0].frames->size() == 2);
  }
  SUBCASE("sentence levels and phrases") {
    std::istringstream in(
        R"({"id":"a","sentences":[{"level":"negative","phrases":[{"level":"negative","intensity":0.7}]},{"level":"neutral","phrases":[]}]})");
    const Corpus out = attach_annotations(c, in);
    const Document& d = out.documents[0];
    CHECK(d.has_phrase_layer);
    CHECK(*d.sentences[0].sentiment == SentimentLevel::Negative);
    REQUIRE(d.sentences[0].phrases.size() == 1);
    CHECK(d.sentences[0].phrases[0].intensity == doctest::Approx(0.7));
    CHECK(*d.sentences[1].sentiment == SentimentLevel::Neutral);
  }
  SUBCASE("layers are overwritten per layer") {
    std::istringstream first(R"({"id":"a","frames":["A"],"belief":["CB"]})");
    std::istringstream second(R"({"id":"a","frames":["B","C"]})");
    const Corpus out = attach_annotations(attach_annotations(c, first), second);
    CHECK(*out.documents[0].frames == std::vector<std::string>{"B", "C"});
    CHECK(out.documents[0].belief_tags->size() == 1);
  }
  SUBCASE("errors") {
    std::istringstream angry(R"({"id":"a","sentences":[{"level":"angry"},{"level":"neutral"}]})");
    CHECK_THROWS_AS(attach_annotations(c, angry), ValidationError);
    std::istringstream loud(
        R"({"id":"a","sentences":[{"level":"neutral","phrases":[{"level":"positive","intensity":1.5}]},{"level":"neutral"}]})");
    CHECK_THROWS_AS(attach_annotations(c, loud), ValidationError);
    std::istringstream unknown(R"({"id":"zz","frames":[]})");
    CHECK_THROWS_AS(attach_annotations(c, unknown), ValidationError);
    std::istringstream count(R"({"id":"a","sentences":[{"level":"neutral"}]})");
    CHECK_THROWS_AS(attach_annotations(c, count), ValidationError);
    std::istringstream tag(R"({"id":"a","belief":["XX"]})");
    CHECK_THROWS_AS(attach_annotations(c, tag), ValidationError);
  }
}

TEST_CASE("store round trip keeps every layer") {
  SynthConfig cfg;
  cfg.docs_per_class = 5;
  Corpus c = synth_corpus(cfg);
  c.documents.push_back(fixtures::words_doc("bare", Label::Negative, {}));
  c.documents.back().has_phrase_layer = true;
  std::ostringstream out;
  write_store(c, out);
  std::istringstream in(out.str());
  const Corpus back = read_store(in, c.name);
  CHECK(back.documents == c.documents);
}

TEST_CASE("sidecar round trip") {
  SynthConfig cfg;
  cfg.docs_per_class = 3;
  const Corpus c = synth_corpus(cfg);
  std::ostringstream side;
  write_sidecar(c, side);
  Corpus stripped = c;
  for (Document& d : stripped.documents) {
    d.frames.reset();
    d.belief_tags.reset();
    d.has_phrase_layer = false;
    for (Sentence& s : d.sentences) {
      s.sentiment.reset();
      s.phrases.clear();
    }
  }
  std::istringstream in(side.str());
  CHECK(attach_annotations(stripped, in).documents == c.documents);
}

}  // TEST_SUITE
