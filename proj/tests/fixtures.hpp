#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "lingua/corpus.hpp"
#include "lingua/random.hpp"

namespace fixtures {

using lingua::Document;
using lingua::Label;
using lingua::Sentence;
using lingua::Token;

inline Token tok(std::string surface, std::string pos = {}, std::size_t head = 0, std::string deprel = {}) {
  Token t{std::move(surface), {}, {}, {}};
  if (!pos.empty()) t.pos = std::move(pos);
  if (!deprel.empty()) {
    t.head = head;
    t.deprel = std::move(deprel);
  }
  return t;
}

// Sentences of bare words; tokens carry no annotations.
inline Document words_doc(std::string id, Label label, const std::vector<std::vector<std::string>>& sentences) {
  Document d;
  d.id = std::move(id);
  d.label = label;
  for (const auto& words : sentences) {
    Sentence s;
    for (const auto& w : words) {
      s.tokens.push_back(tok(w));
      if (!d.raw_text.empty()) d.raw_text += ' ';
      d.raw_text += w;
    }
    d.sentences.push_back(std::move(s));
  }
  return d;
}

// Pair counting over all (positive, negative) pairs, ties count one half.
inline double brute_force_auc(const std::vector<double>& scores, const std::vector<Label>& labels) {
  double good = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != Label::Positive) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != Label::Negative) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) good += 1.0;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return 100.0 * good / pairs;
}

inline double entropy_bits(const std::vector<double>& probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lingua-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
