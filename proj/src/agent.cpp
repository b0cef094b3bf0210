#include "autolike/agent.hpp"

#include <cmath>

#include "autolike/errors.hpp"

namespace autolike {

double QTable::max_value(const State& s, const ActionMask* mask) const {
  bool any = false;
  double best = 0.0;
  for (ActionKind a : kActionOrder) {
    if (mask && !mask->is_valid(a)) continue;
    double v = value(s, a);
    if (!any || v > best) {
      best = v;
      any = true;
    }
  }
  if (!any) throw InputError("action mask leaves no valid action");
  return best;
}

Policy Policy::epsilon_greedy(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ConfigError("epsilon must be in (0,1]");
  }
  Policy p;
  p.kind = Kind::EpsilonGreedy;
  p.epsilon = epsilon;
  return p;
}

Policy Policy::threshold(double like_threshold, Dimensions dims) {
  if (!(like_threshold > 0.0 && like_threshold < 1.0)) {
    throw ConfigError("like_threshold must be in (0,1)");
  }
  Policy p;
  p.kind = Kind::Threshold;
  p.like_threshold = like_threshold;
  p.dimensions = dims;
  return p;
}

double reward(const State& next_state, const Goal& goal) {
  double dt = next_state.topic.value() - goal.topic.value();
  double ds = next_state.sentiment.value() - goal.sentiment.value();
  return 1.0 - std::sqrt(dt * dt + ds * ds) / std::sqrt(2.0);
}

void q_update(QTable& q, const State& s, ActionKind a, double r,
              const State& s_next, double alpha, double gamma,
              const ActionMask* next_mask) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0,1]");
  if (!std::isfinite(r)) throw InputError("non-finite reward");
  double old = q.value(s, a);
  double target = r + gamma * q.max_value(s_next, next_mask);
  q.set(s, a, old + alpha * (target - old));
  q.record_visit(s, a);
}

ActionKind select_action(const Policy& policy, const QTable& q, const State& s,
                         const Scores& scores, const ActionMask& mask,
                         Rng& rng) {
  if (mask.count_valid() < 1) throw InputError("mask has no valid action");
  switch (policy.kind) {
    case Policy::Kind::ScrollOnly:
      return ActionKind::Skip;
    case Policy::Kind::Threshold: {
      bool topic_ok = scores.topic_conf > policy.like_threshold;
      bool sent_ok = scores.sent_conf > policy.like_threshold;
      bool like;
      switch (policy.dimensions) {
        case Dimensions::TopicOnly: like = topic_ok; break;
        case Dimensions::SentimentOnly: like = sent_ok; break;
        default: like = topic_ok && sent_ok; break;
      }
      if (like && mask.is_valid(ActionKind::Like)) return ActionKind::Like;
      return ActionKind::Skip;
    }
    case Policy::Kind::EpsilonGreedy: {
      if (uniform01(rng) < policy.epsilon) {
        // Explore: uniform over valid actions.
        std::vector<ActionKind> valid;
        for (ActionKind a : kActionOrder) {
          if (mask.is_valid(a)) valid.push_back(a);
        }
        std::uniform_int_distribution<std::size_t> pick(0, valid.size() - 1);
        return valid[pick(rng)];
      }
      // Exploit: argmax over valid Q values, first in action order wins ties.
      bool any = false;
      ActionKind best = ActionKind::Skip;
      double best_v = 0.0;
      for (ActionKind a : kActionOrder) {
        if (!mask.is_valid(a)) continue;
        double v = q.value(s, a);
        if (!any || v > best_v) {
          best = a;
          best_v = v;
          any = true;
        }
      }
      return best;
    }
  }
  throw InputError("unreachable policy kind");
}

AgentLoop::AgentLoop(Environment& env, Goal goal, Classifier classifier,
                     double alpha, double gamma, std::uint64_t seed)
    : env_(env), goal_(std::move(goal)), classifier_(std::move(classifier)),
      alpha_(alpha), gamma_(gamma),
      classifier_rng_(make_stream(seed, Stream::Classifier)),
      policy_rng_(make_stream(seed, Stream::Policy)), seed_(seed) {}

void AgentLoop::reset() {
  env_.reset();
  classifier_rng_ = make_stream(seed_, Stream::Classifier);
  policy_rng_ = make_stream(seed_, Stream::Policy);
  pending_.reset();
  step_ = 0;
}

AgentLoop::Pending AgentLoop::observe_next(bool record_all_topics) {
  const Observation& obs = env_.observe();
  Pending p;
  p.item = obs.item;
  p.mask = obs.mask;
  if (obs.scores) {
    p.scores = *obs.scores;
  } else {
    p.scores =
        classify(obs.item, goal_, env_.topics(), classifier_, classifier_rng_);
  }
  p.state = state_from_scores(p.scores.topic_conf, p.scores.sent_conf);
  if (record_all_topics) {
    p.topic_scores =
        score_all_topics(obs.item, env_.topics(), classifier_, classifier_rng_);
  }
  return p;
}

StepRecord AgentLoop::step(const Policy& policy, QTable* q, Phase phase,
                           bool record_all_topics) {
  static const QTable kEmpty;
  Pending cur =
      pending_ ? std::move(*pending_) : observe_next(record_all_topics);
  pending_.reset();
  const QTable& q_ref = q ? *q : kEmpty;
  ActionKind action =
      select_action(policy, q_ref, cur.state, cur.scores, cur.mask, policy_rng_);
  env_.apply(action);
  Pending next = observe_next(record_all_topics);
  double r = reward(next.state, goal_);
  if (policy.kind == Policy::Kind::EpsilonGreedy && q) {
    q_update(*q, cur.state, action, r, next.state, alpha_, gamma_, &next.mask);
  }
  StepRecord record;
  record.step = step_++;
  record.content_id = cur.item.id;
  record.topic_conf = cur.scores.topic_conf;
  record.sent_conf = cur.scores.sent_conf;
  record.state = cur.state;
  record.action = action;
  record.reward = r;
  record.phase = phase;
  record.topic_scores = std::move(cur.topic_scores);
  pending_ = std::move(next);
  return record;
}

}  // namespace autolike
