#pragma once

#include <optional>

#include "autolike/classify.hpp"
#include "autolike/types.hpp"

namespace autolike {

// What the agent sees at one step. scores is set when the environment itself
// supplies confidences (external driver); otherwise the engine classifies.
struct Observation {
  ContentItem item;
  std::optional<Scores> scores;
  ActionMask mask;
};

// One-item-at-a-time feed. observe() is stable until apply() advances the
// feed. Implementations own their personalization state and random stream.
class Environment {
public:
  virtual ~Environment() = default;
  virtual void reset() = 0;
  virtual const Observation& observe() = 0;
  virtual void apply(ActionKind action) = 0;
  virtual const std::vector<std::string>& topics() const = 0;
};

}  // namespace autolike
