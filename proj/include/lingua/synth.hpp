#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lingua/corpus.hpp"
#include "lingua/embeddings.hpp"

namespace lingua {

/// Synthetic, fully annotated two-class corpus. Every channel samples from a
/// class-conditional distribution (1 - s) * base + s * skew_class, so a
/// strength of 0 makes the classes exchangeable.
struct SynthConfig {
  std::size_t docs_per_class = 100;
  std::size_t min_tokens = 80;  // content tokens per document
  std::size_t max_tokens = 160;
  double tag_strength = 1.0;        // POS, dependency relations, frames
  double topic_strength = 1.0;      // word groups (topics and clusters)
  double sentiment_strength = 1.0;  // sentence levels and phrase intensities
  double belief_strength = 1.0;     // committed-belief tags
  std::size_t word_groups = 12;
  std::size_t words_per_group = 30;
  std::size_t vector_dimension = 25;
  std::uint64_t seed = 7;

  void set_strength(double s) { tag_strength = topic_strength = sentiment_strength = belief_strength = s; }
  void validate() const;
};

Corpus synth_corpus(const SynthConfig& config);

/// Word vectors for the synthetic vocabulary: words of one group scatter
/// around a shared random direction.
VectorTable synth_vectors(const SynthConfig& config);

/// The content word `index` of `group`.
std::string synth_word(std::size_t group, std::size_t index, std::size_t words_per_group);

/// GloVe-style text, shortest round-trip numbers.
void write_vectors(const VectorTable& table, std::ostream& out);

}  // namespace lingua
