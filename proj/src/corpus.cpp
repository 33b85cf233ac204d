#include "lingua/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "lingua/error.hpp"
#include "lingua/util.hpp"

namespace lingua {

using nlohmann::json;

namespace {

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

void validate_heads(const Sentence& sentence, const std::string& where) {
  const std::size_t n = sentence.tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Token& tok = sentence.tokens[i];
    if (tok.surface.empty()) throw ValidationError("empty token surface" + where);
    if (!tok.head) continue;
    if (*tok.head > n) {
      throw ValidationError("head index " + std::to_string(*tok.head) + " out of range" + where);
    }
    if (*tok.head == i + 1) throw ValidationError("token is its own head" + where);
  }
}

json sentence_annotations_json(const Sentence& s, bool with_phrases) {
  json out = json::object();
  if (s.sentiment) out["level"] = std::string(sentiment_level_name(*s.sentiment));
  if (with_phrases) {
    json phrases = json::array();
    for (const Phrase& p : s.phrases) {
      phrases.push_back({{"level", std::string(sentiment_level_name(p.level))},
                         {"intensity", p.intensity}});
    }
    out["phrases"] = std::move(phrases);
  }
  return out;
}

SentimentLevel level_from_json(const json& value, const std::string& where) {
  if (!value.is_string()) throw ValidationError("sentiment level must be a string" + where);
  const auto level = parse_sentiment_level(value.get<std::string>());
  if (!level) {
    throw ValidationError("invalid sentiment level '" + value.get<std::string>() + "'" + where);
  }
  return *level;
}

// Applies frames/belief/sentences keys of one sidecar or store record.
void apply_layers(Document& doc, const json& record, const std::string& where) {
  if (record.contains("frames")) {
    std::vector<std::string> frames;
    for (const auto& f : record.at("frames")) {
      if (!f.is_string()) throw ValidationError("frame label must be a string" + where);
      frames.push_back(f.get<std::string>());
    }
    doc.frames = std::move(frames);
  }
  if (record.contains("belief")) {
    std::vector<BeliefTag> tags;
    for (const auto& t : record.at("belief")) {
      const auto tag = t.is_string() ? parse_belief_tag(t.get<std::string>()) : std::nullopt;
      if (!tag) throw ValidationError("invalid belief tag " + t.dump() + where);
      tags.push_back(*tag);
    }
    doc.belief_tags = std::move(tags);
  }
  if (record.contains("sentences")) {
    const json& sentences = record.at("sentences");
    if (!sentences.is_array() || sentences.size() != doc.sentences.size()) {
      throw ValidationError("sentence annotations for '" + doc.id + "' have " +
                            std::to_string(sentences.size()) + " entries but the document has " +
                            std::to_string(doc.sentences.size()) + " sentences" + where);
    }
    bool any_phrases = false;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const json& entry = sentences[i];
      Sentence& target = doc.sentences[i];
      target.sentiment.reset();
      target.phrases.clear();
      if (entry.contains("level") && !entry.at("level").is_null()) {
        target.sentiment = level_from_json(entry.at("level"), where);
      }
      if (entry.contains("phrases")) {
        any_phrases = true;
        for (const auto& p : entry.at("phrases")) {
          Phrase phrase;
          phrase.level = level_from_json(p.at("level"), where);
          if (!p.at("intensity").is_number()) {
            throw ValidationError("intensity must be numeric" + where);
          }
          phrase.intensity = p.at("intensity").get<double>();
          if (!(phrase.intensity >= 0.0 && phrase.intensity <= 1.0)) {
            throw ValidationError("intensity " + format_double(phrase.intensity) +
                                  " outside [0,1]" + where);
          }
          target.phrases.push_back(phrase);
        }
      }
    }
    doc.has_phrase_layer = any_phrases;
  }
}

}  // namespace

std::string_view label_name(Label label) {
  return label == Label::Positive ? "patient" : "control";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "patient") return Label::Positive;
  if (text == "control") return Label::Negative;
  return std::nullopt;
}

std::optional<SentimentLevel> parse_sentiment_level(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '_' || c == ' ' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "verynegative") return SentimentLevel::VeryNegative;
  if (key == "negative") return SentimentLevel::Negative;
  if (key == "neutral") return SentimentLevel::Neutral;
  if (key == "positive") return SentimentLevel::Positive;
  if (key == "verypositive") return SentimentLevel::VeryPositive;
  return std::nullopt;
}

std::string_view sentiment_level_name(SentimentLevel level) {
  switch (level) {
    case SentimentLevel::VeryNegative: return "very_negative";
    case SentimentLevel::Negative: return "negative";
    case SentimentLevel::Neutral: return "neutral";
    case SentimentLevel::Positive: return "positive";
    case SentimentLevel::VeryPositive: return "very_positive";
  }
  return "neutral";
}

std::optional<BeliefTag> parse_belief_tag(std::string_view text) {
  if (text == "CB") return BeliefTag::CB;
  if (text == "NCB") return BeliefTag::NCB;
  if (text == "ROB") return BeliefTag::ROB;
  if (text == "NA") return BeliefTag::NA;
  return std::nullopt;
}

std::string_view belief_tag_name(BeliefTag tag) {
  switch (tag) {
    case BeliefTag::CB: return "CB";
    case BeliefTag::NCB: return "NCB";
    case BeliefTag::ROB: return "ROB";
    case BeliefTag::NA: return "NA";
  }
  return "NA";
}

std::size_t Document::token_count() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += s.tokens.size();
  return n;
}

std::size_t Corpus::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      documents.begin(), documents.end(), [&](const Document& d) { return d.label == label; }));
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents.size());
  for (const Document& d : documents) out.push_back(d.label);
  return out;
}

const Document* Corpus::find(std::string_view id) const {
  for (const Document& d : documents) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

Corpus Corpus::subset(const std::vector<std::size_t>& indices) const {
  Corpus out{name, source, {}};
  out.documents.reserve(indices.size());
  for (std::size_t i : indices) out.documents.push_back(documents.at(i));
  return out;
}

void require_both_classes(const Corpus& corpus) {
  if (corpus.count(Label::Positive) == 0 || corpus.count(Label::Negative) == 0) {
    throw ValidationError("corpus '" + corpus.name + "' must contain both patient and control documents");
  }
}

Corpus read_corpus(std::istream& in, std::string name) {
  Corpus corpus{std::move(name), "jsonl", {}};
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error&) {
      throw ValidationError("malformed record" + at_line(line_no));
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
        !record.contains("label") || !record["label"].is_string() || !record.contains("text") ||
        !record["text"].is_string()) {
      throw ValidationError("malformed record" + at_line(line_no) +
                            ": expected string fields id, label, text");
    }
    const auto label = parse_label(record["label"].get<std::string>());
    if (!label) throw ValidationError("invalid label" + at_line(line_no));
    Document doc;
    doc.id = record["id"].get<std::string>();
    doc.label = *label;
    doc.raw_text = record["text"].get<std::string>();
    if (!seen.insert(doc.id).second) {
      throw ValidationError("duplicate id '" + doc.id + "'" + at_line(line_no));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus " + path.string());
  return read_corpus(in, path.stem().string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents) {
    json record = {{"id", d.id}, {"label", std::string(label_name(d.label))}, {"text", d.raw_text}};
    out << record.dump() << '\n';
  }
}

std::vector<ConlluDocument> parse_conllu(std::istream& in, PosColumn column) {
  std::vector<ConlluDocument> docs;
  std::optional<std::string> current_id;
  Sentence sentence;
  std::size_t sentence_start = 0;
  std::size_t line_no = 0;

  const auto flush = [&] {
    if (sentence.tokens.empty()) return;
    if (!current_id) {
      throw ValidationError("sentence without a preceding '# doc_id' comment" +
                            at_line(sentence_start));
    }
    validate_heads(sentence, " in sentence starting" + at_line(sentence_start));
    if (docs.empty() || docs.back().id != *current_id) docs.push_back({*current_id, {}});
    docs.back().sentences.push_back(std::move(sentence));
    sentence = Sentence{};
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      const std::string_view body = trim(std::string_view(line).substr(1));
      for (std::string_view key : {std::string_view("doc_id"), std::string_view("newdoc id")}) {
        if (body.substr(0, key.size()) != key) continue;
        std::string_view rest = trim(body.substr(key.size()));
        if (rest.empty() || rest.front() != '=') continue;
        flush();
        current_id = std::string(trim(rest.substr(1)));
      }
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ValidationError("expected 10 tab-separated columns, found " +
                            std::to_string(cols.size()) + at_line(line_no));
    }
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    if (sentence.tokens.empty()) sentence_start = line_no;
    if (cols[0] != std::to_string(sentence.tokens.size() + 1)) {
      throw ValidationError("token id " + cols[0] + " out of sequence" + at_line(line_no));
    }
    Token tok;
    tok.surface = cols[1];
    const std::string& tag = column == PosColumn::Upos ? cols[3] : cols[4];
    if (tag != "_") tok.pos = tag;
    if (cols[6] != "_") {
      std::size_t head = 0;
      try {
        std::size_t used = 0;
        head = std::stoul(cols[6], &used);
        if (used != cols[6].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError("non-numeric head '" + cols[6] + "'" + at_line(line_no));
      }
      tok.head = head;
    }
    if (cols[7] != "_") tok.deprel = cols[7];
    sentence.tokens.push_back(std::move(tok));
  }
  flush();
  return docs;
}

void write_conllu(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents) {
    out << "# doc_id = " << d.id << '\n';
    for (const Sentence& s : d.sentences) {
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        out << (i + 1) << '\t' << t.surface << "\t_\t_\t" << t.pos.value_or("_") << "\t_\t"
            << (t.head ? std::to_string(*t.head) : "_") << '\t' << t.deprel.value_or("_")
            << "\t_\t_\n";
      }
      out << '\n';
    }
  }
}

Corpus attach_conllu(Corpus corpus, const std::vector<ConlluDocument>& parsed) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) index[corpus.documents[i].id] = i;
  for (const ConlluDocument& doc : parsed) {
    const auto it = index.find(doc.id);
    if (it == index.end()) throw ValidationError("CoNLL-U refers to unknown document '" + doc.id + "'");
    corpus.documents[it->second].sentences = doc.sentences;
  }
  return corpus;
}

Corpus attach_annotations(Corpus corpus, std::istream& sidecar) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) index[corpus.documents[i].id] = i;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(sidecar, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error&) {
      throw ValidationError("malformed sidecar record" + at_line(line_no));
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
      throw ValidationError("sidecar record without string id" + at_line(line_no));
    }
    const std::string id = record["id"].get<std::string>();
    const auto it = index.find(id);
    if (it == index.end()) {
      throw ValidationError("sidecar refers to unknown document '" + id + "'" + at_line(line_no));
    }
    try {
      apply_layers(corpus.documents[it->second], record, at_line(line_no));
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed sidecar record") + at_line(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

Corpus attach_annotations(Corpus corpus, const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw ValidationError("cannot open sidecar " + sidecar.string());
  return attach_annotations(std::move(corpus), in);
}

void write_sidecar(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents) {
    json record = {{"id", d.id}};
    if (d.frames) record["frames"] = *d.frames;
    if (d.belief_tags) {
      json tags = json::array();
      for (BeliefTag t : *d.belief_tags) tags.push_back(std::string(belief_tag_name(t)));
      record["belief"] = std::move(tags);
    }
    const bool any_sentiment = std::any_of(d.sentences.begin(), d.sentences.end(),
                                           [](const Sentence& s) { return s.sentiment.has_value(); });
    if (any_sentiment || d.has_phrase_layer) {
      json sentences = json::array();
      for (const Sentence& s : d.sentences) sentences.push_back(sentence_annotations_json(s, d.has_phrase_layer));
      record["sentences"] = std::move(sentences);
    }
    out << record.dump() << '\n';
  }
}

void write_store(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents) {
    json record = {{"id", d.id}, {"label", std::string(label_name(d.label))}, {"text", d.raw_text}};
    json tokens_layer = json::array();
    for (const Sentence& s : d.sentences) {
      json tokens = json::array();
      for (const Token& t : s.tokens) {
        json tok = {{"form", t.surface}};
        if (t.pos) tok["pos"] = *t.pos;
        if (t.head) tok["head"] = *t.head;
        if (t.deprel) tok["deprel"] = *t.deprel;
        tokens.push_back(std::move(tok));
      }
      tokens_layer.push_back(std::move(tokens));
    }
    record["tokens"] = std::move(tokens_layer);
    if (d.frames) record["frames"] = *d.frames;
    if (d.belief_tags) {
      json tags = json::array();
      for (BeliefTag t : *d.belief_tags) tags.push_back(std::string(belief_tag_name(t)));
      record["belief"] = std::move(tags);
    }
    json sentences = json::array();
    for (const Sentence& s : d.sentences) sentences.push_back(sentence_annotations_json(s, d.has_phrase_layer));
    record["sentences"] = std::move(sentences);
    record["phrase_layer"] = d.has_phrase_layer;
    out << record.dump() << '\n';
  }
}

Corpus read_store(std::istream& in, std::string name) {
  Corpus corpus{std::move(name), "store", {}};
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json record = json::parse(line);
      Document doc;
      doc.id = record.at("id").get<std::string>();
      const auto label = parse_label(record.at("label").get<std::string>());
      if (!label) throw ValidationError("invalid label" + at_line(line_no));
      doc.label = *label;
      doc.raw_text = record.value("text", std::string{});
      for (const auto& tokens : record.at("tokens")) {
        Sentence s;
        for (const auto& t : tokens) {
          Token tok;
          tok.surface = t.at("form").get<std::string>();
          if (t.contains("pos")) tok.pos = t["pos"].get<std::string>();
          if (t.contains("head")) tok.head = t["head"].get<std::size_t>();
          if (t.contains("deprel")) tok.deprel = t["deprel"].get<std::string>();
          s.tokens.push_back(std::move(tok));
        }
        validate_heads(s, at_line(line_no));
        doc.sentences.push_back(std::move(s));
      }
      apply_layers(doc, record, at_line(line_no));
      doc.has_phrase_layer = record.value("phrase_layer", doc.has_phrase_layer);
      if (!seen.insert(doc.id).second) {
        throw ValidationError("duplicate id '" + doc.id + "'" + at_line(line_no));
      }
      corpus.documents.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw ValidationError("malformed store record" + at_line(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace lingua
