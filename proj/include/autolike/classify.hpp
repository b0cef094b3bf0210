#pragma once

#include <map>
#include <string>
#include <vector>

#include "autolike/rng.hpp"
#include "autolike/types.hpp"

namespace autolike {

// Topic term lists plus sentiment terms and the hashtag stop-list.
// Loaded from JSON: {"topics": {label: [term,...]}, "negative_terms": [...],
// "stoplist": [...]}.
struct Lexicon {
  std::map<std::string, std::vector<std::string>> topics;
  std::vector<std::string> negative_terms;
  std::vector<std::string> stoplist;  // defaults added on load
};

Lexicon default_stoplist_only();

enum class ClassifierMode { Oracle, Keyword, External };

struct Classifier {
  ClassifierMode mode = ClassifierMode::Oracle;
  double noise_sigma = 0.0;  // Oracle only
  Lexicon lexicon;           // Keyword only
};

struct Scores {
  double topic_conf = 0.0;
  double sent_conf = 0.0;
};

// Removes stop-list hashtags and hashtags whose alphanumeric lowercase form
// equals the topic label's; collapses whitespace.
std::string clean_text(const std::string& text, const std::string& topic_label,
                       const std::vector<std::string>& stoplist);

// Stop-list defaults only ("#foryoupage", "#foryou", "#fyp").
std::string clean_text(const std::string& text, const std::string& topic_label);

// Scores one item against the goal topic. Oracle reads the item's latent
// attributes plus clamped Gaussian noise; Keyword scores cleaned text by
// lexicon coverage. External is a contract violation here: scores arrive over
// the driver protocol instead.
Scores classify(const ContentItem& item, const Goal& goal,
                const std::vector<std::string>& catalog_topics,
                const Classifier& classifier, Rng& rng);

// Per-topic confidences for control-run reuse. Oracle covers every catalog
// topic, Keyword every lexicon topic.
std::map<std::string, double> score_all_topics(
    const ContentItem& item, const std::vector<std::string>& catalog_topics,
    const Classifier& classifier, Rng& rng);

struct EvalCounts {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  long long total() const { return tp + fp + tn + fn; }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
};

// Standard confusion-matrix metrics; every 0/0 ratio is defined as 0.
Metrics eval_metrics(const EvalCounts& counts);

struct LabeledItem {
  ContentItem item;
  bool is_on_topic = false;
  bool is_negative = false;
};

struct ClassifierEval {
  EvalCounts topic;
  EvalCounts sentiment;
};

// Predicts positive when confidence > threshold; tallies topic and sentiment
// confusion counts independently.
ClassifierEval eval_classifier(const std::vector<LabeledItem>& labeled_set,
                               const Goal& goal,
                               const std::vector<std::string>& catalog_topics,
                               const Classifier& classifier, double threshold,
                               Rng& rng);

}  // namespace autolike
