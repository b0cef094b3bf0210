#include "autolike/types.hpp"

#include <cmath>

namespace autolike {

const std::string& action_name(ActionKind a) {
  static const std::string names[kActionCount] = {"like", "watch", "bookmark",
                                                  "repost", "skip"};
  return names[static_cast<int>(a)];
}

ActionKind action_from_name(const std::string& name) {
  for (ActionKind a : kActionOrder) {
    if (action_name(a) == name) return a;
  }
  throw InputError("unknown action name: " + name);
}

const std::string& phase_name(Phase p) {
  static const std::string names[3] = {"train", "test", "control"};
  return names[static_cast<int>(p)];
}

Phase phase_from_name(const std::string& name) {
  if (name == "train") return Phase::Train;
  if (name == "test") return Phase::Test;
  if (name == "control") return Phase::Control;
  throw InputError("unknown phase name: " + name);
}

const std::string& mode_name(Mode m) {
  static const std::string names[3] = {"rl", "streamlined", "controlled"};
  return names[static_cast<int>(m)];
}

Mode mode_from_name(const std::string& name) {
  if (name == "rl") return Mode::RL;
  if (name == "streamlined") return Mode::Streamlined;
  if (name == "controlled") return Mode::Controlled;
  throw InputError("unknown mode: " + name);
}

const std::string& dimensions_name(Dimensions d) {
  static const std::string names[3] = {"topic_only", "sentiment_only", "both"};
  return names[static_cast<int>(d)];
}

Dimensions dimensions_from_name(const std::string& name) {
  if (name == "topic_only") return Dimensions::TopicOnly;
  if (name == "sentiment_only") return Dimensions::SentimentOnly;
  if (name == "both") return Dimensions::Both;
  throw InputError("unknown dimensions: " + name);
}

GridLevel discretize(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw InputError("score outside [0,1]: " + std::to_string(score));
  }
  // Nearest of the 11 levels; on an exact tie the higher level wins.
  int best = 0;
  double best_dist = std::abs(score);
  for (int level = 1; level <= 10; ++level) {
    double dist = std::abs(level / 10.0 - score);
    if (dist <= best_dist) {
      best = level;
      best_dist = dist;
    }
  }
  return GridLevel{best};
}

State state_from_scores(double topic_conf, double sent_conf) {
  return State{discretize(topic_conf), discretize(sent_conf)};
}

}  // namespace autolike
