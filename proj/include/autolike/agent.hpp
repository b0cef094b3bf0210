#pragma once

#include <array>
#include <optional>
#include <vector>

#include "autolike/classify.hpp"
#include "autolike/env.hpp"
#include "autolike/rng.hpp"
#include "autolike/types.hpp"

namespace autolike {

// Tabular state-action values over the 121-state, 5-action space.
class QTable {
public:
  QTable() : values_{}, visits_{} {}

  double value(const State& s, ActionKind a) const {
    return values_[s.index()][static_cast<int>(a)];
  }
  long long visits(const State& s, ActionKind a) const {
    return visits_[s.index()][static_cast<int>(a)];
  }
  void set(const State& s, ActionKind a, double v) {
    values_[s.index()][static_cast<int>(a)] = v;
  }
  void record_visit(const State& s, ActionKind a) {
    ++visits_[s.index()][static_cast<int>(a)];
  }
  // Max over valid actions (all five when mask is absent).
  double max_value(const State& s, const ActionMask* mask = nullptr) const;

private:
  std::array<std::array<double, kActionCount>, kStateCount> values_;
  std::array<std::array<long long, kActionCount>, kStateCount> visits_;
};

struct Policy {
  enum class Kind { EpsilonGreedy, Threshold, ScrollOnly };
  Kind kind = Kind::ScrollOnly;
  double epsilon = 0.1;                       // EpsilonGreedy
  double like_threshold = 0.5;                // Threshold
  Dimensions dimensions = Dimensions::TopicOnly;  // Threshold

  static Policy epsilon_greedy(double epsilon);
  static Policy threshold(double like_threshold, Dimensions dims);
  static Policy scroll_only() { return Policy{}; }
};

// Proximity reward: 1 - euclidean(s, g) / sqrt(2), over real-valued grid
// coordinates. Always in [0,1].
double reward(const State& next_state, const Goal& goal);

// One TD backup: Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
void q_update(QTable& q, const State& s, ActionKind a, double r,
              const State& s_next, double alpha, double gamma,
              const ActionMask* next_mask = nullptr);

ActionKind select_action(const Policy& policy, const QTable& q, const State& s,
                         const Scores& scores, const ActionMask& mask,
                         Rng& rng);

// Drives (observe, classify, act, learn) against an environment. Caches the
// upcoming item's scores so each item is classified exactly once per run.
class AgentLoop {
public:
  AgentLoop(Environment& env, Goal goal, Classifier classifier, double alpha,
            double gamma, std::uint64_t seed);

  // Runs one step under the given policy; q may be null for non-learning
  // policies. Control runs set record_all_topics to capture per-topic scores.
  StepRecord step(const Policy& policy, QTable* q, Phase phase,
                  bool record_all_topics = false);

  void reset();

private:
  struct Pending {
    ContentItem item;
    Scores scores;
    State state;
    ActionMask mask;
    std::map<std::string, double> topic_scores;
  };
  Pending observe_next(bool record_all_topics);

  Environment& env_;
  Goal goal_;
  Classifier classifier_;
  double alpha_;
  double gamma_;
  Rng classifier_rng_;
  Rng policy_rng_;
  std::uint64_t seed_;
  std::optional<Pending> pending_;
  int step_ = 0;
};

}  // namespace autolike
