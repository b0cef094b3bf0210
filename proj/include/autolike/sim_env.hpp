#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <unordered_set>
#include <vector>

#include "autolike/env.hpp"
#include "autolike/rng.hpp"
#include "autolike/types.hpp"

namespace autolike {

// Internal personalization state of the simulated recommendation system.
struct SimUserProfile {
  std::vector<double> interest;     // per catalog topic, in [0,1]
  double sentiment_affinity = 0.5;  // in [0,1]
  long long interactions = 0;
};

struct SimParams {
  // Positive weights pull interests toward the item; Skip's negative weight
  // decays them.
  std::array<double, kActionCount> action_weights = {
      0.30,   // Like
      0.15,   // Watch
      0.35,   // Bookmark
      0.40,   // Repost
      -0.10,  // Skip
  };
  double lambda0 = 0.9;       // popularity weight for a fresh profile
  double lambda_tau = 40.0;   // interactions until personalization dominates
  double softmax_temp = 0.15;
  int no_repeat_window = 500;
  double sentiment_learn_rate = 0.5;  // multiplier on the action weight
  // Per-action probability an item renders the action unavailable; Skip is
  // always valid regardless.
  std::array<double, kActionCount> invalid_prob = {0, 0, 0, 0, 0};

  double weight(ActionKind a) const {
    return action_weights[static_cast<int>(a)];
  }
};

struct Catalog {
  std::vector<ContentItem> items;
  std::vector<std::string> topic_labels;
};

void validate(const Catalog& catalog);  // throws ConfigError

// Deterministic fixture generator. One entry per topic: how many items, how
// concentrated their mixtures are, and the Beta distribution of their latent
// sentiment.
struct TopicGenParams {
  std::string label;
  int count = 0;
  double mixture_lo = 0.7;
  double mixture_hi = 0.95;
  double sentiment_alpha = 2.0;
  double sentiment_beta = 5.0;
};

struct CatalogGenParams {
  std::vector<TopicGenParams> topics;
  double popularity_alpha = 2.0;
  double popularity_beta = 2.0;
  double duration_lo = 5.0;
  double duration_hi = 60.0;
  bool with_text = false;
};

CatalogGenParams default_catalog_params();

Catalog generate_catalog(const CatalogGenParams& params, std::uint64_t seed);

SimUserProfile reset_profile(const Catalog& catalog);

// Exposed for unit tests; SimEnvironment composes them.
double lambda_t(const SimParams& params, long long interactions);
SimUserProfile apply_action(const SimUserProfile& profile,
                            const ContentItem& item, ActionKind action,
                            const SimParams& params);

class SimEnvironment : public Environment {
public:
  SimEnvironment(Catalog catalog, SimParams params, std::uint64_t seed);

  void reset() override;
  const Observation& observe() override;
  void apply(ActionKind action) override;
  const std::vector<std::string>& topics() const override {
    return catalog_.topic_labels;
  }

  const SimUserProfile& profile() const { return profile_; }

private:
  const ContentItem& recommend();
  ActionMask draw_mask(const ContentItem& item);
  void advance();

  Catalog catalog_;
  SimParams params_;
  std::uint64_t seed_;
  Rng rng_;
  SimUserProfile profile_;
  std::deque<std::string> recent_;
  std::unordered_set<std::string> recent_set_;
  Observation current_;
  bool has_current_ = false;
};

}  // namespace autolike
