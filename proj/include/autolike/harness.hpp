#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "autolike/agent.hpp"
#include "autolike/config.hpp"
#include "autolike/env.hpp"
#include "autolike/types.hpp"

namespace autolike {

struct RunResult {
  Pathway pathway;
  std::optional<QTable> q_final;
  // Training step count at which the stopping rule fired; absent when the
  // horizon ran out first.
  std::optional<int> stop_step;
};

struct RatioCurve {
  std::vector<int> steps;
  std::vector<long long> driven_cumulative;
  std::vector<long long> control_cumulative;
  std::vector<double> ratio;  // driven / max(1, control)
  std::vector<Phase> phase;   // driven run's phase at each step
};

// True iff at least `needed` likes occurred within the last `window` steps and
// a full window has elapsed.
bool at_goal(const std::deque<bool>& recent_likes, int needed, int window);

// Scroll-only baseline on a fresh profile; records per-topic scores so the
// run can be re-classified against any goal.
RunResult run_controlled(const ExperimentConfig& config, Environment& env);

// Training phase under the configured policy until the stopping rule fires
// (never before min_train_steps) or the horizon runs out, then a skip-only
// testing phase of test_steps.
RunResult run_driven(const ExperimentConfig& config, Environment& env);

// Cumulative on-goal counts per step, driven vs control, aligned by step
// index over min(lengths). Control confidences come from its recorded
// per-topic scores.
RatioCurve compare(const Pathway& driven, const Pathway& control,
                   const Goal& goal, double threshold, Dimensions dimensions);

// Cumulative count of steps with sent_conf > threshold, topic ignored.
std::vector<long long> sentiment_post_process(const Pathway& pathway,
                                              double threshold);

}  // namespace autolike
