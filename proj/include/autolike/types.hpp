#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autolike/errors.hpp"

namespace autolike {

// One axis of the 11-level score grid. level/10 is the real value.
struct GridLevel {
  int level = 0;  // 0..10

  double value() const { return level / 10.0; }
  friend bool operator==(GridLevel a, GridLevel b) { return a.level == b.level; }
  friend auto operator<=>(GridLevel a, GridLevel b) { return a.level <=> b.level; }
};

inline constexpr int kGridLevels = 11;

// Discretized <topic, sentiment> observation. Sentiment: 0 = positive/happy,
// 1.0 = negative/sad. 121 distinct states.
struct State {
  GridLevel topic;
  GridLevel sentiment;

  int index() const { return topic.level * kGridLevels + sentiment.level; }
  friend bool operator==(const State&, const State&) = default;
};

inline constexpr int kStateCount = kGridLevels * kGridLevels;

struct Goal {
  GridLevel topic;
  GridLevel sentiment;
  std::string topic_label;
};

enum class ActionKind { Like, Watch, Bookmark, Repost, Skip };

inline constexpr int kActionCount = 5;

// Fixed action order; also the argmax tie-break order.
inline constexpr std::array<ActionKind, kActionCount> kActionOrder = {
    ActionKind::Like, ActionKind::Watch, ActionKind::Bookmark,
    ActionKind::Repost, ActionKind::Skip};

inline bool is_positive(ActionKind a) { return a != ActionKind::Skip; }

const std::string& action_name(ActionKind a);
ActionKind action_from_name(const std::string& name);  // throws InputError

struct ActionMask {
  std::array<bool, kActionCount> valid = {true, true, true, true, true};

  bool is_valid(ActionKind a) const { return valid[static_cast<int>(a)]; }
  void set(ActionKind a, bool v) { valid[static_cast<int>(a)] = v; }
  int count_valid() const {
    int n = 0;
    for (bool v : valid) n += v;
    return n;
  }
};

// A feed item as the simulator (or a driver) serves it. topic_mixture has one
// entry per catalog topic and sums to at most 1.
struct ContentItem {
  std::string id;
  std::vector<double> topic_mixture;
  double latent_sentiment = 0.0;
  double popularity = 0.0;
  double duration_s = 0.0;
  std::optional<std::string> text;
};

enum class Phase { Train, Test, Control };

const std::string& phase_name(Phase p);
Phase phase_from_name(const std::string& name);

struct StepRecord {
  int step = 0;
  std::string content_id;
  double topic_conf = 0.0;
  double sent_conf = 0.0;
  State state;
  ActionKind action = ActionKind::Skip;
  double reward = 0.0;
  Phase phase = Phase::Train;
  // Control runs record every registered topic's confidence so the run can be
  // re-classified against any goal afterwards.
  std::map<std::string, double> topic_scores;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Pathway {
  std::vector<StepRecord> records;
  std::string config_digest;
  std::uint64_t seed = 0;

  friend bool operator==(const Pathway&, const Pathway&) = default;
};

enum class Mode { RL, Streamlined, Controlled };

enum class Dimensions { TopicOnly, SentimentOnly, Both };

const std::string& mode_name(Mode m);
Mode mode_from_name(const std::string& name);
const std::string& dimensions_name(Dimensions d);
Dimensions dimensions_from_name(const std::string& name);

// Nearest grid level; exact midpoints (0.05, 0.15, ...) round up.
GridLevel discretize(double score);  // throws InputError outside [0,1]

State state_from_scores(double topic_conf, double sent_conf);

}  // namespace autolike
