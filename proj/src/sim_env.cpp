#include "autolike/sim_env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "autolike/errors.hpp"

namespace autolike {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double l1(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0,
                         [](double s, double x) { return s + std::abs(x); });
}

double personalization(const SimUserProfile& profile, const ContentItem& item) {
  double dot = 0.0;
  for (std::size_t k = 0;
       k < std::min(profile.interest.size(), item.topic_mixture.size()); ++k) {
    dot += profile.interest[k] * item.topic_mixture[k];
  }
  double norm = std::max(1e-9, l1(profile.interest) * l1(item.topic_mixture));
  double topic_match = clamp01(dot / norm);
  double sentiment_match =
      1.0 - std::abs(profile.sentiment_affinity - item.latent_sentiment);
  return topic_match * sentiment_match;
}

}  // namespace

void validate(const Catalog& catalog) {
  if (catalog.items.size() < 2) {
    throw ConfigError("catalog needs at least 2 items");
  }
  std::unordered_set<std::string> ids;
  for (const auto& item : catalog.items) {
    if (item.topic_mixture.size() != catalog.topic_labels.size()) {
      throw ConfigError("item " + item.id +
                        " mixture size does not match topic labels");
    }
    double sum = std::accumulate(item.topic_mixture.begin(),
                                 item.topic_mixture.end(), 0.0);
    if (sum > 1.0 + 1e-9) {
      throw ConfigError("item " + item.id + " mixture sums to > 1");
    }
    if (!ids.insert(item.id).second) {
      throw ConfigError("duplicate item id: " + item.id);
    }
  }
}

CatalogGenParams default_catalog_params() {
  CatalogGenParams params;
  // Audit-style topic labels; fixtures override counts and sentiment shapes.
  for (const char* label :
       {"mental health", "self harm", "dangerous challenges", "eating disorder",
        "physical violence", "hate speech", "cyberbullying", "adult content",
        "discrimination"}) {
    params.topics.push_back(TopicGenParams{label, 220});
  }
  return params;
}

Catalog generate_catalog(const CatalogGenParams& params, std::uint64_t seed) {
  if (params.topics.empty()) throw ConfigError("catalog has no topics");
  Catalog catalog;
  for (const auto& t : params.topics) catalog.topic_labels.push_back(t.label);
  Rng rng = make_stream(seed, Stream::Catalog);
  const std::size_t n_topics = params.topics.size();
  int serial = 0;
  for (std::size_t k = 0; k < n_topics; ++k) {
    const auto& t = params.topics[k];
    for (int i = 0; i < t.count; ++i) {
      ContentItem item;
      item.id = "item-" + std::to_string(serial++);
      double primary =
          t.mixture_lo + (t.mixture_hi - t.mixture_lo) * uniform01(rng);
      item.topic_mixture.assign(n_topics, 0.0);
      item.topic_mixture[k] = primary;
      // Spread the remainder thinly over the other topics.
      double spill = (1.0 - primary) * uniform01(rng);
      if (n_topics > 1) {
        for (std::size_t j = 0; j < n_topics; ++j) {
          if (j != k) item.topic_mixture[j] = spill / (n_topics - 1);
        }
      }
      item.latent_sentiment = beta(rng, t.sentiment_alpha, t.sentiment_beta);
      item.popularity = beta(rng, params.popularity_alpha, params.popularity_beta);
      item.duration_s =
          params.duration_lo +
          (params.duration_hi - params.duration_lo) * uniform01(rng);
      if (params.with_text) {
        item.text = t.label + (item.latent_sentiment > 0.5 ? " sad" : " happy") +
                    " #fyp";
      }
      catalog.items.push_back(std::move(item));
    }
  }
  validate(catalog);
  return catalog;
}

SimUserProfile reset_profile(const Catalog& catalog) {
  SimUserProfile profile;
  profile.interest.assign(catalog.topic_labels.size(), 0.05);
  profile.sentiment_affinity = 0.5;
  profile.interactions = 0;
  return profile;
}

double lambda_t(const SimParams& params, long long interactions) {
  return params.lambda0 *
         std::exp(-static_cast<double>(interactions) / params.lambda_tau);
}

SimUserProfile apply_action(const SimUserProfile& profile,
                            const ContentItem& item, ActionKind action,
                            const SimParams& params) {
  SimUserProfile next = profile;
  double w = params.weight(action);
  for (std::size_t k = 0;
       k < std::min(next.interest.size(), item.topic_mixture.size()); ++k) {
    double m = item.topic_mixture[k];
    if (w >= 0.0) {
      next.interest[k] += w * m * (1.0 - next.interest[k]);
    } else {
      next.interest[k] += w * m * next.interest[k];
    }
    next.interest[k] = clamp01(next.interest[k]);
  }
  if (w > 0.0) {
    double ws = params.sentiment_learn_rate * w;
    next.sentiment_affinity +=
        ws * (item.latent_sentiment - next.sentiment_affinity);
    next.sentiment_affinity = clamp01(next.sentiment_affinity);
  }
  ++next.interactions;
  return next;
}

SimEnvironment::SimEnvironment(Catalog catalog, SimParams params,
                               std::uint64_t seed)
    : catalog_(std::move(catalog)), params_(params), seed_(seed),
      rng_(make_stream(seed, Stream::Environment)) {
  validate(catalog_);
  reset();
}

void SimEnvironment::reset() {
  rng_ = make_stream(seed_, Stream::Environment);
  profile_ = reset_profile(catalog_);
  recent_.clear();
  recent_set_.clear();
  has_current_ = false;
}

const Observation& SimEnvironment::observe() {
  if (!has_current_) advance();
  return current_;
}

void SimEnvironment::apply(ActionKind action) {
  const Observation& obs = observe();
  if (!obs.mask.is_valid(action)) {
    throw InputError("action " + action_name(action) +
                     " is not valid for item " + obs.item.id);
  }
  profile_ = apply_action(profile_, obs.item, action, params_);
  has_current_ = false;
}

void SimEnvironment::advance() {
  const ContentItem& item = recommend();
  recent_.push_back(item.id);
  recent_set_.insert(item.id);
  while (static_cast<int>(recent_.size()) > params_.no_repeat_window) {
    recent_set_.erase(recent_.front());
    recent_.pop_front();
  }
  current_ = Observation{item, std::nullopt, draw_mask(item)};
  has_current_ = true;
}

const ContentItem& SimEnvironment::recommend() {
  double lam = lambda_t(params_, profile_.interactions);
  std::vector<const ContentItem*> candidates;
  std::vector<double> scores;
  auto collect = [&](const std::unordered_set<std::string>& excluded) {
    candidates.clear();
    scores.clear();
    for (const auto& item : catalog_.items) {
      if (excluded.count(item.id)) continue;
      candidates.push_back(&item);
      scores.push_back(lam * item.popularity +
                       (1.0 - lam) * personalization(profile_, item));
    }
  };
  collect(recent_set_);
  if (candidates.empty()) {
    // Window covered the whole catalog: drop its older half and retry once.
    std::size_t keep = recent_.size() / 2;
    while (recent_.size() > keep) recent_.pop_front();
    recent_set_.clear();
    recent_set_.insert(recent_.begin(), recent_.end());
    collect(recent_set_);
    if (candidates.empty()) {
      throw EnvironmentExhausted("no candidate items left to recommend");
    }
  }
  // Softmax over scores at the configured temperature.
  double max_score = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp((s - max_score) / params_.softmax_temp);
    total += s;
  }
  double draw = uniform01(rng_) * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cum += scores[i];
    if (draw <= cum) return *candidates[i];
  }
  return *candidates.back();
}

ActionMask SimEnvironment::draw_mask(const ContentItem&) {
  ActionMask mask;
  for (ActionKind a : kActionOrder) {
    if (a == ActionKind::Skip) continue;  // Skip is always valid
    double p = params_.invalid_prob[static_cast<int>(a)];
    if (p > 0.0 && uniform01(rng_) < p) mask.set(a, false);
  }
  return mask;
}

}  // namespace autolike
