#include "autolike/classify.hpp"

#include <algorithm>
#include <cctype>

#include "autolike/errors.hpp"

namespace autolike {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Lowercase with everything non-alphanumeric stripped; used to compare
// hashtags against the topic label ("#EdRecovery" vs "ed recovery").
std::string alnum_lower(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> whitespace_split(const std::string& s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> word_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

bool contains_sequence(const std::vector<std::string>& haystack,
                       const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + i)) {
      return true;
    }
  }
  return false;
}

// Coverage fraction: matched distinct terms over the term-list size.
double coverage_score(const std::vector<std::string>& text_tokens,
                      const std::vector<std::string>& terms) {
  long long matched = 0;
  for (const auto& term : terms) {
    if (contains_sequence(text_tokens, word_tokens(term))) ++matched;
  }
  return clamp01(static_cast<double>(matched) /
                 static_cast<double>(std::max<std::size_t>(1, terms.size())));
}

int topic_index(const std::string& label,
                const std::vector<std::string>& catalog_topics) {
  auto it = std::find(catalog_topics.begin(), catalog_topics.end(), label);
  if (it == catalog_topics.end()) {
    throw ConfigError("topic label not registered in catalog: " + label);
  }
  return static_cast<int>(it - catalog_topics.begin());
}

double oracle_topic_conf(const ContentItem& item, int idx, double sigma,
                         Rng& rng) {
  double mix = idx < static_cast<int>(item.topic_mixture.size())
                   ? item.topic_mixture[idx]
                   : 0.0;
  return clamp01(mix + (sigma > 0.0 ? normal(rng, sigma) : 0.0));
}

Scores keyword_scores(const ContentItem& item, const std::string& topic_label,
                      const Lexicon& lex) {
  auto it = lex.topics.find(topic_label);
  if (it == lex.topics.end()) {
    throw ConfigError("topic label not in lexicon: " + topic_label);
  }
  if (!item.text) return Scores{0.0, 0.0};
  auto tokens =
      word_tokens(clean_text(*item.text, topic_label, lex.stoplist));
  return Scores{coverage_score(tokens, it->second),
                coverage_score(tokens, lex.negative_terms)};
}

}  // namespace

Lexicon default_stoplist_only() {
  Lexicon lex;
  lex.stoplist = {"#foryoupage", "#foryou", "#fyp"};
  return lex;
}

std::string clean_text(const std::string& text, const std::string& topic_label,
                       const std::vector<std::string>& stoplist) {
  const std::string label_key = alnum_lower(topic_label);
  std::string out;
  for (const auto& token : whitespace_split(text)) {
    if (token.front() == '#') {
      const std::string low = lower(token);
      bool stopped =
          std::find_if(stoplist.begin(), stoplist.end(), [&](const auto& s) {
            return lower(s) == low;
          }) != stoplist.end();
      if (stopped) continue;
      if (!label_key.empty() && alnum_lower(token) == label_key) continue;
    }
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string clean_text(const std::string& text,
                       const std::string& topic_label) {
  return clean_text(text, topic_label, default_stoplist_only().stoplist);
}

Scores classify(const ContentItem& item, const Goal& goal,
                const std::vector<std::string>& catalog_topics,
                const Classifier& classifier, Rng& rng) {
  switch (classifier.mode) {
    case ClassifierMode::Oracle: {
      int idx = topic_index(goal.topic_label, catalog_topics);
      double topic = oracle_topic_conf(item, idx, classifier.noise_sigma, rng);
      double sent = clamp01(item.latent_sentiment +
                            (classifier.noise_sigma > 0.0
                                 ? normal(rng, classifier.noise_sigma)
                                 : 0.0));
      return Scores{topic, sent};
    }
    case ClassifierMode::Keyword:
      return keyword_scores(item, goal.topic_label, classifier.lexicon);
    case ClassifierMode::External:
      throw ConfigError(
          "classify() called with External classifier; scores must arrive "
          "over the driver protocol");
  }
  throw ConfigError("unreachable classifier mode");
}

std::map<std::string, double> score_all_topics(
    const ContentItem& item, const std::vector<std::string>& catalog_topics,
    const Classifier& classifier, Rng& rng) {
  std::map<std::string, double> out;
  if (classifier.mode == ClassifierMode::Oracle) {
    for (std::size_t i = 0; i < catalog_topics.size(); ++i) {
      out[catalog_topics[i]] = oracle_topic_conf(
          item, static_cast<int>(i), classifier.noise_sigma, rng);
    }
  } else if (classifier.mode == ClassifierMode::Keyword) {
    for (const auto& [label, terms] : classifier.lexicon.topics) {
      if (!item.text) {
        out[label] = 0.0;
        continue;
      }
      auto tokens = word_tokens(
          clean_text(*item.text, label, classifier.lexicon.stoplist));
      out[label] = coverage_score(tokens, terms);
    }
  }
  return out;  // External: empty, scores live with the driver
}

Metrics eval_metrics(const EvalCounts& counts) {
  if (counts.total() < 1) throw InputError("eval counts must be >= 1");
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  Metrics m;
  m.precision = ratio(counts.tp, counts.tp + counts.fp);
  m.recall = ratio(counts.tp, counts.tp + counts.fn);
  m.accuracy = ratio(counts.tp + counts.tn, counts.total());
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

ClassifierEval eval_classifier(const std::vector<LabeledItem>& labeled_set,
                               const Goal& goal,
                               const std::vector<std::string>& catalog_topics,
                               const Classifier& classifier, double threshold,
                               Rng& rng) {
  if (labeled_set.empty()) throw InputError("labeled set is empty");
  ClassifierEval eval;
  auto tally = [](EvalCounts& c, bool predicted, bool actual) {
    if (predicted && actual) ++c.tp;
    else if (predicted && !actual) ++c.fp;
    else if (!predicted && !actual) ++c.tn;
    else ++c.fn;
  };
  for (const auto& labeled : labeled_set) {
    Scores s = classify(labeled.item, goal, catalog_topics, classifier, rng);
    tally(eval.topic, s.topic_conf > threshold, labeled.is_on_topic);
    tally(eval.sentiment, s.sent_conf > threshold, labeled.is_negative);
  }
  return eval;
}

}  // namespace autolike
