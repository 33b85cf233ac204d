#include "lingua/features.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lingua/error.hpp"
#include "lingua/random.hpp"
#include "lingua/util.hpp"

namespace lingua {

using nlohmann::json;

std::string_view channel_name(Channel channel) {
  switch (channel) {
    case Channel::Pos: return "POS";
    case Channel::Dep: return "DEP";
    case Channel::Srl: return "SRL";
    case Channel::Topic: return "TOPIC";
    case Channel::Cluster: return "CLUSTER";
    case Channel::Lcb: return "LCB";
    case Channel::Sent: return "SENT";
    case Channel::Int: return "INT";
  }
  return "?";
}

std::string_view channel_prefix(Channel channel) {
  switch (channel) {
    case Channel::Pos: return "pos_";
    case Channel::Dep: return "dep_";
    case Channel::Srl: return "srl_";
    case Channel::Topic: return "topic_";
    case Channel::Cluster: return "cluster_";
    case Channel::Lcb: return "lcb_";
    case Channel::Sent: return "sent_";
    case Channel::Int: return "int_";
  }
  return "";
}

std::optional<Channel> parse_channel(std::string_view text) {
  const std::string upper = [&] {
    std::string s(text);
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }();
  for (Channel c : kChannels) {
    if (channel_name(c) == upper) return c;
  }
  return std::nullopt;
}

std::vector<Channel> ChannelSet::members() const {
  std::vector<Channel> out;
  for (Channel c : kChannels) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string ChannelSet::to_string() const {
  std::string out;
  for (Channel c : members()) {
    if (!out.empty()) out += ",";
    out += channel_name(c);
  }
  return out;
}

void FeatureSpace::add(Channel channel, std::string name) {
  if (!channels_.empty() && static_cast<int>(channel) < static_cast<int>(channels_.back())) {
    throw Error("feature channels must be added in column order");
  }
  if (index_.count(name)) throw Error("duplicate feature name '" + name + "'");
  index_.emplace(name, names_.size());
  names_.push_back(std::move(name));
  channels_.push_back(channel);
}

std::optional<std::size_t> FeatureSpace::index_of(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ChannelSet FeatureSpace::channels() const {
  ChannelSet s;
  for (Channel c : channels_) s.insert(c);
  return s;
}

std::pair<std::size_t, std::size_t> FeatureSpace::block(Channel channel) const {
  const auto first = std::find(channels_.begin(), channels_.end(), channel);
  if (first == channels_.end()) return {0, 0};
  const auto last = std::find_if(first, channels_.end(), [&](Channel c) { return c != channel; });
  return {static_cast<std::size_t>(first - channels_.begin()),
          static_cast<std::size_t>(last - channels_.begin())};
}

FeatureSpace FeatureSpace::project(ChannelSet channels) const {
  FeatureSpace out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (channels.contains(channels_[i])) out.add(channels_[i], names_[i]);
  }
  return out;
}

json FeatureSpace::to_json() const {
  json features = json::array();
  for (std::size_t i = 0; i < names_.size(); ++i) {
    features.push_back({names_[i], std::string(channel_name(channels_[i]))});
  }
  return {{"features", std::move(features)}};
}

Matrix FeatureMatrix::dense() const {
  Matrix m(rows.size(), space.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [col, value] : rows[r]) m(r, col) = value;
  }
  return m;
}

std::string FeatureMatrix::to_csv() const {
  std::ostringstream out;
  out << "id,label";
  for (const std::string& n : space.names()) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << ids[r] << ',' << label_name(labels[r]);
    std::size_t col = 0;
    for (const auto& [c, value] : rows[r]) {
      for (; col < c; ++col) out << ",0";
      out << ',' << format_double(value);
      ++col;
    }
    for (; col < space.size(); ++col) out << ",0";
    out << '\n';
  }
  return out.str();
}

bool has_layer(const Document& doc, Channel channel) {
  const auto all_tokens = [&](auto pred) {
    if (doc.sentences.empty()) return false;
    for (const Sentence& s : doc.sentences) {
      for (const Token& t : s.tokens) {
        if (!pred(t)) return false;
      }
    }
    return true;
  };
  switch (channel) {
    case Channel::Pos: return all_tokens([](const Token& t) { return t.pos.has_value(); });
    case Channel::Dep: return all_tokens([](const Token& t) { return t.deprel.has_value(); });
    case Channel::Srl: return doc.frames.has_value();
    case Channel::Lcb: return doc.belief_tags.has_value();
    case Channel::Sent:
      return !doc.sentences.empty() &&
             std::all_of(doc.sentences.begin(), doc.sentences.end(),
                         [](const Sentence& s) { return s.sentiment.has_value(); });
    case Channel::Int: return doc.has_phrase_layer;
    case Channel::Topic:
    case Channel::Cluster: return true;
  }
  return false;
}

std::vector<std::string> channel_events(const Document& doc, Channel channel) {
  if (!has_layer(doc, channel)) {
    throw ValidationError("document '" + doc.id + "' lacks the " +
                          std::string(channel_name(channel)) + " annotation layer");
  }
  std::vector<std::string> events;
  switch (channel) {
    case Channel::Pos:
    case Channel::Dep:
      for (const Sentence& s : doc.sentences) {
        for (const Token& t : s.tokens) events.push_back(channel == Channel::Pos ? *t.pos : *t.deprel);
      }
      break;
    case Channel::Srl: events = *doc.frames; break;
    case Channel::Lcb:
      for (BeliefTag t : *doc.belief_tags) events.emplace_back(belief_tag_name(t));
      break;
    case Channel::Sent:
      for (const Sentence& s : doc.sentences) events.emplace_back(sentiment_level_name(*s.sentiment));
      break;
    default:
      throw Error("channel " + std::string(channel_name(channel)) + " is not a tag channel");
  }
  return events;
}

FeatureVector tag_frequency(const Document& doc, Channel channel, const FeatureSpace& space) {
  const auto events = channel_events(doc, channel);
  std::map<std::size_t, std::size_t> counts;
  const std::string prefix(channel_prefix(channel));
  for (const std::string& e : events) {
    if (const auto col = space.index_of(prefix + e)) ++counts[*col];
  }
  FeatureVector out;
  const double total = static_cast<double>(events.size());
  for (const auto& [col, n] : counts) out[col] = static_cast<double>(n) / total;
  return out;
}

FeatureVector sentiment_intensity(const Document& doc, const FeatureSpace& space) {
  std::array<double, kSentimentLevels.size()> sums{};
  for (const Sentence& s : doc.sentences) {
    for (const Phrase& p : s.phrases) sums[static_cast<std::size_t>(p.level)] += p.intensity;
  }
  FeatureVector out;
  const std::string prefix(channel_prefix(Channel::Int));
  for (SentimentLevel level : kSentimentLevels) {
    const double v = sums[static_cast<std::size_t>(level)];
    if (v == 0.0) continue;
    if (const auto col = space.index_of(prefix + std::string(sentiment_level_name(level)))) out[*col] = v;
  }
  return out;
}

std::uint64_t inference_seed(const TopicModel& model, const Document& doc) {
  return model.config.seed * 0x9E3779B97F4A7C15ULL ^ stable_hash(doc.id);
}

TopicFeatures topic_features(const Document& doc, const TopicModel& model, const FeatureSpace& space) {
  const auto [begin, end] = space.block(Channel::Topic);
  if (end - begin != model.topic_count()) {
    throw Error("topic block has " + std::to_string(end - begin) + " columns but the model has " +
                std::to_string(model.topic_count()) + " topics");
  }
  const ThetaEstimate estimate = infer_theta(model, doc, inference_seed(model, doc));
  TopicFeatures out;
  out.uniform_fallback = estimate.uniform_fallback;
  for (std::size_t k = 0; k < estimate.theta.size(); ++k) out.values[begin + k] = estimate.theta[k];
  return out;
}

FeatureVector cluster_frequency(const Document& doc, const ClusterModel& model,
                                const FeatureSpace& space) {
  std::map<std::size_t, std::size_t> counts;
  std::size_t mapped = 0;
  for (const Sentence& s : doc.sentences) {
    for (const Token& t : s.tokens) {
      if (const auto c = assign(t.surface, model)) {
        ++counts[*c];
        ++mapped;
      }
    }
  }
  FeatureVector out;
  const std::string prefix(channel_prefix(Channel::Cluster));
  for (const auto& [cluster, n] : counts) {
    if (const auto col = space.index_of(prefix + std::to_string(cluster))) {
      out[*col] = static_cast<double>(n) / static_cast<double>(mapped);
    }
  }
  return out;
}

FeatureSpace build_feature_space(const Corpus& corpus, ChannelSet channels, std::size_t topic_count,
                                 std::size_t cluster_count) {
  if (corpus.documents.empty()) throw ValidationError("cannot build a feature space from an empty corpus");
  FeatureSpace space;
  for (Channel channel : channels.members()) {
    const std::string prefix(channel_prefix(channel));
    switch (channel) {
      case Channel::Pos:
      case Channel::Dep:
      case Channel::Srl: {
        std::set<std::string> inventory;
        for (const Document& doc : corpus.documents) {
          if (!has_layer(doc, channel)) continue;
          for (std::string& e : channel_events(doc, channel)) inventory.insert(std::move(e));
        }
        for (const std::string& tag : inventory) space.add(channel, prefix + tag);
        break;
      }
      case Channel::Topic:
        for (std::size_t k = 0; k < topic_count; ++k) space.add(channel, prefix + std::to_string(k));
        break;
      case Channel::Cluster:
        for (std::size_t k = 0; k < cluster_count; ++k) space.add(channel, prefix + std::to_string(k));
        break;
      case Channel::Lcb:
        for (BeliefTag t : kBeliefTags) space.add(channel, prefix + std::string(belief_tag_name(t)));
        break;
      case Channel::Sent:
      case Channel::Int:
        for (SentimentLevel l : kSentimentLevels) {
          space.add(channel, prefix + std::string(sentiment_level_name(l)));
        }
        break;
    }
  }
  return space;
}

FeatureVector compose(const FeatureSpace& full, const FeatureVector& values, ChannelSet category) {
  // Columns of kept channels shift down by the width of dropped blocks before them.
  std::vector<std::ptrdiff_t> target(full.size(), -1);
  std::size_t next = 0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (category.contains(full.channel(i))) target[i] = static_cast<std::ptrdiff_t>(next++);
  }
  FeatureVector out;
  for (const auto& [col, v] : values) {
    if (target.at(col) >= 0) out[static_cast<std::size_t>(target[col])] = v;
  }
  return out;
}

std::optional<Profile> parse_profile(std::string_view text) {
  const std::string lower = to_lower(text);
  if (lower == "labwriting") return Profile::LabWriting;
  if (lower == "twitter") return Profile::Twitter;
  return std::nullopt;
}

std::string_view profile_name(Profile profile) {
  return profile == Profile::LabWriting ? "labwriting" : "twitter";
}

ChannelSet profile_channels(Profile profile) {
  if (profile == Profile::Twitter) {
    return {Channel::Pos, Channel::Dep, Channel::Topic, Channel::Cluster, Channel::Sent};
  }
  return ChannelSet::all();
}

std::vector<Category> profile_categories(Profile profile) {
  const ChannelSet syntax{Channel::Pos, Channel::Dep};
  const ChannelSet semantics{Channel::Srl, Channel::Topic, Channel::Cluster};
  const ChannelSet pragmatics{Channel::Lcb, Channel::Sent, Channel::Int};
  const std::vector<Category> rows = {
      {"pos", "POS", {Channel::Pos}},
      {"parse", "Parse", {Channel::Dep}},
      {"srl", "SRL", {Channel::Srl}},
      {"topics", "Topics", {Channel::Topic}},
      {"clusters", "Clusters", {Channel::Cluster}},
      {"lcb", "LCB", {Channel::Lcb}},
      {"sentiment", "Sentiment", {Channel::Sent}},
      {"intensity", "Sentiment Intensity", {Channel::Int}},
      {"syntax", "Syntax", syntax},
      {"semantics", "Semantics", semantics},
      {"pragmatics", "Pragmatics", pragmatics},
      {"syntax_semantics", "Syntax + Semantics", syntax | semantics},
      {"syntax_pragmatics", "Syntax + Pragmatics", syntax | pragmatics},
      {"semantics_pragmatics", "Semantics + Pragmatics", semantics | pragmatics},
      {"all", "All", ChannelSet::all()},
  };
  const ChannelSet available = profile_channels(profile);
  std::vector<Category> out;
  for (const Category& row : rows) {
    Category c{row.id, row.display, row.channels & available};
    if (c.channels.empty()) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const Category& o) { return o.channels == c.channels; });
    if (!duplicate) out.push_back(std::move(c));
  }
  return out;
}

Category resolve_category(std::string_view name, Profile profile) {
  std::string key = to_lower(trim(name));
  for (Profile p : {Profile::LabWriting, Profile::Twitter}) {
    const std::string suffix = "-" + std::string(profile_name(p));
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      key.resize(key.size() - suffix.size());
      profile = p;
    }
  }
  std::string id;
  for (char c : key) {
    if (c == ' ') continue;
    id.push_back(c == '+' ? '_' : c);
  }
  for (const Category& c : profile_categories(profile)) {
    if (c.id == id) return c;
  }
  throw ValidationError("unknown feature category '" + std::string(name) + "' for profile " +
                        std::string(profile_name(profile)));
}

void require_channels(const Corpus& corpus, ChannelSet channels) {
  for (Channel c : channels.members()) {
    const bool any = std::any_of(corpus.documents.begin(), corpus.documents.end(),
                                 [&](const Document& d) { return has_layer(d, c); });
    if (!any) {
      throw ValidationError("no document carries the " + std::string(channel_name(c)) +
                            " annotation layer required by the requested features");
    }
  }
}

FeatureVector extract_features(const Document& doc, const FeatureSpace& space,
                               const FeatureModels& models, std::size_t* uniform_topics) {
  FeatureVector out;
  const auto merge = [&](const FeatureVector& block) { out.insert(block.begin(), block.end()); };
  for (Channel channel : space.channels().members()) {
    if (!has_layer(doc, channel)) {
      throw ValidationError("document '" + doc.id + "' lacks the " +
                            std::string(channel_name(channel)) + " annotation layer");
    }
    switch (channel) {
      case Channel::Topic: {
        if (!models.topics) throw Error("topic features requested without a topic model");
        const TopicFeatures t = topic_features(doc, *models.topics, space);
        if (t.uniform_fallback && uniform_topics) ++*uniform_topics;
        merge(t.values);
        break;
      }
      case Channel::Cluster:
        if (!models.clusters) throw Error("cluster features requested without a cluster model");
        merge(cluster_frequency(doc, *models.clusters, space));
        break;
      case Channel::Int: merge(sentiment_intensity(doc, space)); break;
      default: merge(tag_frequency(doc, channel, space)); break;
    }
  }
  return out;
}

}  // namespace lingua
