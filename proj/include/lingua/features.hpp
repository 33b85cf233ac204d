#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lingua/corpus.hpp"
#include "lingua/embeddings.hpp"
#include "lingua/matrix.hpp"
#include "lingua/topics.hpp"

namespace lingua {

/// Feature channels, in their fixed column order.
enum class Channel { Pos, Dep, Srl, Topic, Cluster, Lcb, Sent, Int };
inline constexpr std::array<Channel, 8> kChannels = {Channel::Pos,   Channel::Dep,     Channel::Srl,
                                                     Channel::Topic, Channel::Cluster, Channel::Lcb,
                                                     Channel::Sent,  Channel::Int};

std::string_view channel_name(Channel channel);    // "POS", "DEP", ...
std::string_view channel_prefix(Channel channel);  // "pos_", "dep_", ...
std::optional<Channel> parse_channel(std::string_view text);

/// Small set of channels that iterates in column order.
class ChannelSet {
 public:
  constexpr ChannelSet() = default;
  constexpr ChannelSet(std::initializer_list<Channel> channels) {
    for (Channel c : channels) insert(c);
  }
  static constexpr ChannelSet all() {
    return {Channel::Pos, Channel::Dep,  Channel::Srl,  Channel::Topic,
            Channel::Cluster, Channel::Lcb, Channel::Sent, Channel::Int};
  }

  constexpr void insert(Channel c) { bits_ |= bit(c); }
  constexpr bool contains(Channel c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr ChannelSet operator|(ChannelSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr ChannelSet operator&(ChannelSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr bool operator==(const ChannelSet&) const = default;

  std::vector<Channel> members() const;
  std::string to_string() const;

 private:
  static constexpr std::uint8_t bit(Channel c) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)); }
  static constexpr ChannelSet from_bits(std::uint8_t b) {
    ChannelSet s;
    s.bits_ = b;
    return s;
  }
  std::uint8_t bits_ = 0;
};

/// Ordered, unique feature names grouped into contiguous channel blocks.
class FeatureSpace {
 public:
  /// Appends a feature. Channels must be added in column order.
  void add(Channel channel, std::string name);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  Channel channel(std::size_t i) const { return channels_[i]; }
  std::span<const std::string> names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  ChannelSet channels() const;
  /// [begin, end) column range of a channel's block (empty if absent).
  std::pair<std::size_t, std::size_t> block(Channel channel) const;

  /// Sub-space holding only the given channels, in column order.
  FeatureSpace project(ChannelSet channels) const;

  nlohmann::json to_json() const;

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b) {
    return a.names_ == b.names_ && a.channels_ == b.channels_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Channel> channels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Sparse column -> value map over a FeatureSpace.
using FeatureVector = std::map<std::size_t, double>;

struct FeatureMatrix {
  FeatureSpace space;
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;

  Matrix dense() const;
  /// Header "id,label,<feature names>" then one CSV row per document.
  std::string to_csv() const;
};

/// True when the document carries the annotation layer a channel reads.
/// TOPIC and CLUSTER only need tokens.
bool has_layer(const Document& doc, Channel channel);

/// Event labels a frequency channel counts in a document (POS tags,
/// relations, frame labels, belief tags, sentence sentiment levels).
std::vector<std::string> channel_events(const Document& doc, Channel channel);

/// Relative frequency of each inventory tag among the document's channel
/// events. Events outside the space still count toward the total.
FeatureVector tag_frequency(const Document& doc, Channel channel, const FeatureSpace& space);

/// Summed phrase intensity per sentiment level.
FeatureVector sentiment_intensity(const Document& doc, const FeatureSpace& space);

struct TopicFeatures {
  FeatureVector values;
  bool uniform_fallback = false;
};
TopicFeatures topic_features(const Document& doc, const TopicModel& model, const FeatureSpace& space);

/// Per token occurrence: share of mapped tokens falling in each cluster.
FeatureVector cluster_frequency(const Document& doc, const ClusterModel& model,
                                const FeatureSpace& space);

/// Inventory of the channels over the given corpus: observed tags sorted
/// lexicographically for POS/DEP/SRL, the closed label sets for LCB, SENT and
/// INT, and topic_k / cluster_k columns.
FeatureSpace build_feature_space(const Corpus& corpus, ChannelSet channels,
                                 std::size_t topic_count = 0, std::size_t cluster_count = 0);

/// Restriction of a full-space vector to the category's channels, re-indexed
/// into full.project(category).
FeatureVector compose(const FeatureSpace& full, const FeatureVector& values, ChannelSet category);

// --- Feature categories ------------------------------------------------------

enum class Profile { LabWriting, Twitter };

std::optional<Profile> parse_profile(std::string_view text);
std::string_view profile_name(Profile profile);
/// Channels a dataset profile provides.
ChannelSet profile_channels(Profile profile);

struct Category {
  std::string id;       // "syntax_semantics"
  std::string display;  // "Syntax + Semantics"
  ChannelSet channels;
};

/// The feature-set rows evaluated for a profile: single channels, the three
/// linguistic levels, their pairwise unions and everything combined.
std::vector<Category> profile_categories(Profile profile);

/// Looks up a row id, optionally suffixed with "-labwriting" / "-twitter" to
/// override the profile.
Category resolve_category(std::string_view name, Profile profile);

/// Throws ValidationError naming the first channel of `channels` that no
/// document in the corpus carries.
void require_channels(const Corpus& corpus, ChannelSet channels);

/// Extraction inputs for one fitted pipeline.
struct FeatureModels {
  const TopicModel* topics = nullptr;
  const ClusterModel* clusters = nullptr;
};

/// All blocks of `space` for one document. Counts topic fallbacks into
/// `uniform_topics` when given.
FeatureVector extract_features(const Document& doc, const FeatureSpace& space,
                               const FeatureModels& models, std::size_t* uniform_topics = nullptr);

/// Seed for a document's topic inference, derived from the model seed and id.
std::uint64_t inference_seed(const TopicModel& model, const Document& doc);

}  // namespace lingua
