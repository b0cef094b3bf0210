#include "autolike/harness.hpp"

#include <algorithm>

#include "autolike/errors.hpp"

namespace autolike {
namespace {

Policy train_policy_for(const ExperimentConfig& config) {
  if (config.mode == Mode::RL) return Policy::epsilon_greedy(config.epsilon);
  return Policy::threshold(config.like_threshold, config.dimensions);
}

// Goal-topic confidence for analysis: per-topic scores when recorded (control
// runs), else the confidence the run was classified with.
double topic_conf_for(const StepRecord& record, const std::string& label) {
  auto it = record.topic_scores.find(label);
  if (it != record.topic_scores.end()) return it->second;
  if (record.phase == Phase::Control) {
    throw AnalysisError("control pathway has no recorded scores for topic: " +
                        label);
  }
  return record.topic_conf;
}

bool on_goal(const StepRecord& record, const std::string& label,
             double threshold, Dimensions dimensions) {
  bool topic_ok = topic_conf_for(record, label) > threshold;
  bool sent_ok = record.sent_conf > threshold;
  switch (dimensions) {
    case Dimensions::TopicOnly: return topic_ok;
    case Dimensions::SentimentOnly: return sent_ok;
    default: return topic_ok && sent_ok;
  }
}

}  // namespace

bool at_goal(const std::deque<bool>& recent_likes, int needed, int window) {
  if (needed > window) throw ConfigError("stop_likes_needed exceeds stop_window");
  if (static_cast<int>(recent_likes.size()) < window) return false;
  int likes = 0;
  for (std::size_t i = recent_likes.size() - window; i < recent_likes.size();
       ++i) {
    likes += recent_likes[i];
  }
  return likes >= needed;
}

RunResult run_controlled(const ExperimentConfig& config, Environment& env) {
  if (config.mode != Mode::Controlled) {
    throw ConfigError("run_controlled requires controlled mode");
  }
  AgentLoop loop(env, config.goal, config.classifier, config.alpha,
                 config.gamma, config.seed);
  loop.reset();
  RunResult result;
  result.pathway.seed = config.seed;
  Policy scroll = Policy::scroll_only();
  for (int t = 0; t < config.horizon_T; ++t) {
    result.pathway.records.push_back(
        loop.step(scroll, nullptr, Phase::Control, /*record_all_topics=*/true));
  }
  return result;
}

RunResult run_driven(const ExperimentConfig& config, Environment& env) {
  if (config.mode == Mode::Controlled) {
    throw ConfigError("run_driven requires streamlined or rl mode");
  }
  AgentLoop loop(env, config.goal, config.classifier, config.alpha,
                 config.gamma, config.seed);
  loop.reset();
  RunResult result;
  result.pathway.seed = config.seed;
  Policy policy = train_policy_for(config);
  QTable q;
  QTable* q_ptr = config.mode == Mode::RL ? &q : nullptr;
  std::deque<bool> recent_likes;
  for (int t = 0; t < config.horizon_T; ++t) {
    StepRecord record = loop.step(policy, q_ptr, Phase::Train);
    recent_likes.push_back(record.action == ActionKind::Like);
    if (static_cast<int>(recent_likes.size()) > config.stop_window) {
      recent_likes.pop_front();
    }
    result.pathway.records.push_back(std::move(record));
    int taken = t + 1;
    if (taken >= config.min_train_steps &&
        at_goal(recent_likes, config.stop_likes_needed, config.stop_window)) {
      result.stop_step = taken;
      break;
    }
  }
  // Testing phase runs either way so every experiment yields a
  // comparable-length pathway.
  Policy scroll = Policy::scroll_only();
  for (int t = 0; t < config.test_steps; ++t) {
    result.pathway.records.push_back(loop.step(scroll, nullptr, Phase::Test));
  }
  if (config.mode == Mode::RL) result.q_final = q;
  return result;
}

RatioCurve compare(const Pathway& driven, const Pathway& control,
                   const Goal& goal, double threshold, Dimensions dimensions) {
  std::size_t n = std::min(driven.records.size(), control.records.size());
  RatioCurve curve;
  long long driven_cum = 0;
  long long control_cum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    driven_cum +=
        on_goal(driven.records[i], goal.topic_label, threshold, dimensions);
    control_cum +=
        on_goal(control.records[i], goal.topic_label, threshold, dimensions);
    curve.steps.push_back(static_cast<int>(i));
    curve.driven_cumulative.push_back(driven_cum);
    curve.control_cumulative.push_back(control_cum);
    curve.ratio.push_back(static_cast<double>(driven_cum) /
                          static_cast<double>(std::max<long long>(1, control_cum)));
    curve.phase.push_back(driven.records[i].phase);
  }
  return curve;
}

std::vector<long long> sentiment_post_process(const Pathway& pathway,
                                              double threshold) {
  std::vector<long long> series;
  long long cum = 0;
  for (const auto& record : pathway.records) {
    cum += record.sent_conf > threshold;
    series.push_back(cum);
  }
  return series;
}

}  // namespace autolike
