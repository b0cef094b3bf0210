#include "autolike/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "autolike/errors.hpp"
#include "autolike/jsonutil.hpp"

namespace autolike {
namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file for reading: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  return out;
}

json record_to_json(const StepRecord& r) {
  json j;
  j["step"] = r.step;
  j["content_id"] = r.content_id;
  j["topic_conf"] = round9(r.topic_conf);
  j["sent_conf"] = round9(r.sent_conf);
  j["state"] = {{"topic", r.state.topic.level},
                {"sentiment", r.state.sentiment.level}};
  j["action"] = action_name(r.action);
  j["reward"] = round9(r.reward);
  j["phase"] = phase_name(r.phase);
  if (!r.topic_scores.empty()) {
    json scores;
    for (const auto& [label, conf] : r.topic_scores) {
      scores[label] = round9(conf);
    }
    j["topic_scores"] = std::move(scores);
  }
  return j;
}

StepRecord record_from_json(const json& j) {
  StepRecord r;
  r.step = j.at("step").get<int>();
  r.content_id = j.at("content_id").get<std::string>();
  r.topic_conf = j.at("topic_conf").get<double>();
  r.sent_conf = j.at("sent_conf").get<double>();
  r.state.topic.level = j.at("state").at("topic").get<int>();
  r.state.sentiment.level = j.at("state").at("sentiment").get<int>();
  r.action = action_from_name(j.at("action").get<std::string>());
  r.reward = j.at("reward").get<double>();
  r.phase = phase_from_name(j.at("phase").get<std::string>());
  if (j.contains("topic_scores")) {
    for (const auto& [label, conf] : j["topic_scores"].items()) {
      r.topic_scores[label] = conf.get<double>();
    }
  }
  return r;
}

json item_to_json(const ContentItem& item) {
  json j;
  j["id"] = item.id;
  json mix = json::array();
  for (double m : item.topic_mixture) mix.push_back(round9(m));
  j["topic_mixture"] = std::move(mix);
  j["latent_sentiment"] = round9(item.latent_sentiment);
  j["popularity"] = round9(item.popularity);
  j["duration_s"] = round9(item.duration_s);
  if (item.text) j["text"] = *item.text;
  return j;
}

ContentItem item_from_json(const json& j) {
  ContentItem item;
  item.id = j.at("id").get<std::string>();
  item.topic_mixture = j.at("topic_mixture").get<std::vector<double>>();
  item.latent_sentiment = j.at("latent_sentiment").get<double>();
  item.popularity = j.at("popularity").get<double>();
  item.duration_s = j.value("duration_s", 0.0);
  if (j.contains("text")) item.text = j["text"].get<std::string>();
  return item;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["mode"] = mode_name(c.mode);
  j["goal"] = {{"topic", c.goal.topic.level},
               {"sentiment", c.goal.sentiment.level},
               {"topic_label", c.goal.topic_label}};
  j["horizon_T"] = c.horizon_T;
  j["min_train_steps"] = c.min_train_steps;
  j["stop_likes_needed"] = c.stop_likes_needed;
  j["stop_window"] = c.stop_window;
  j["test_steps"] = c.test_steps;
  j["like_threshold"] = round9(c.like_threshold);
  j["dimensions"] = dimensions_name(c.dimensions);
  j["alpha"] = round9(c.alpha);
  j["gamma"] = round9(c.gamma);
  j["epsilon"] = round9(c.epsilon);
  j["seed"] = c.seed;
  json classifier;
  switch (c.classifier.mode) {
    case ClassifierMode::Oracle:
      classifier["kind"] = "oracle";
      classifier["noise_sigma"] = round9(c.classifier.noise_sigma);
      break;
    case ClassifierMode::Keyword:
      classifier["kind"] = "keyword";
      classifier["lexicon_file"] = c.lexicon_file.value_or("");
      break;
    case ClassifierMode::External:
      classifier["kind"] = "external";
      break;
  }
  j["classifier"] = std::move(classifier);
  if (c.simulator) {
    json sim;
    const SimParams& p = c.simulator->params;
    json weights;
    json invalid;
    for (ActionKind a : kActionOrder) {
      weights[action_name(a)] = round9(p.weight(a));
      invalid[action_name(a)] = round9(p.invalid_prob[static_cast<int>(a)]);
    }
    sim["params"] = {{"action_weights", std::move(weights)},
                     {"lambda0", round9(p.lambda0)},
                     {"lambda_tau", round9(p.lambda_tau)},
                     {"softmax_temp", round9(p.softmax_temp)},
                     {"no_repeat_window", p.no_repeat_window},
                     {"sentiment_learn_rate", round9(p.sentiment_learn_rate)},
                     {"invalid_prob", std::move(invalid)}};
    if (c.simulator->catalog_gen) {
      const CatalogGenParams& g = *c.simulator->catalog_gen;
      json topics = json::array();
      for (const auto& t : g.topics) {
        topics.push_back({{"label", t.label},
                          {"count", t.count},
                          {"mixture_lo", round9(t.mixture_lo)},
                          {"mixture_hi", round9(t.mixture_hi)},
                          {"sentiment_alpha", round9(t.sentiment_alpha)},
                          {"sentiment_beta", round9(t.sentiment_beta)}});
      }
      sim["catalog"] = {{"topics", std::move(topics)},
                        {"popularity_alpha", round9(g.popularity_alpha)},
                        {"popularity_beta", round9(g.popularity_beta)},
                        {"duration_lo", round9(g.duration_lo)},
                        {"duration_hi", round9(g.duration_hi)},
                        {"with_text", g.with_text}};
    }
    if (c.simulator->catalog_file) {
      sim["catalog_file"] = *c.simulator->catalog_file;
    }
    j["simulator"] = std::move(sim);
  }
  if (c.driver) j["driver"] = *c.driver;
  return j;
}

SimParams sim_params_from_json(const json& j) {
  SimParams p;
  if (j.contains("action_weights")) {
    for (const auto& [name, w] : j["action_weights"].items()) {
      p.action_weights[static_cast<int>(action_from_name(name))] =
          w.get<double>();
    }
  }
  p.lambda0 = j.value("lambda0", p.lambda0);
  p.lambda_tau = j.value("lambda_tau", p.lambda_tau);
  p.softmax_temp = j.value("softmax_temp", p.softmax_temp);
  p.no_repeat_window = j.value("no_repeat_window", p.no_repeat_window);
  p.sentiment_learn_rate =
      j.value("sentiment_learn_rate", p.sentiment_learn_rate);
  if (j.contains("invalid_prob")) {
    for (const auto& [name, prob] : j["invalid_prob"].items()) {
      p.invalid_prob[static_cast<int>(action_from_name(name))] =
          prob.get<double>();
    }
  }
  return p;
}

CatalogGenParams catalog_gen_from_json(const json& j) {
  CatalogGenParams g;
  g.topics.clear();
  for (const auto& t : j.at("topics")) {
    TopicGenParams topic;
    topic.label = t.at("label").get<std::string>();
    topic.count = t.at("count").get<int>();
    topic.mixture_lo = t.value("mixture_lo", topic.mixture_lo);
    topic.mixture_hi = t.value("mixture_hi", topic.mixture_hi);
    topic.sentiment_alpha = t.value("sentiment_alpha", topic.sentiment_alpha);
    topic.sentiment_beta = t.value("sentiment_beta", topic.sentiment_beta);
    g.topics.push_back(std::move(topic));
  }
  g.popularity_alpha = j.value("popularity_alpha", g.popularity_alpha);
  g.popularity_beta = j.value("popularity_beta", g.popularity_beta);
  g.duration_lo = j.value("duration_lo", g.duration_lo);
  g.duration_hi = j.value("duration_hi", g.duration_hi);
  g.with_text = j.value("with_text", g.with_text);
  return g;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (goal.topic.level < 0 || goal.topic.level > 10 ||
      goal.sentiment.level < 0 || goal.sentiment.level > 10) {
    throw ConfigError("goal levels must be in 0..10");
  }
  if (goal.topic_label.empty()) throw ConfigError("goal.topic_label is empty");
  if (horizon_T < 1) throw ConfigError("horizon_T must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in [0,1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ConfigError("epsilon must be in (0,1]");
  }
  if (stop_likes_needed > stop_window) {
    throw ConfigError("stop_likes_needed exceeds stop_window");
  }
  if (!simulator && !driver) {
    throw ConfigError("config needs either a simulator or a driver endpoint");
  }
  if (simulator && !simulator->catalog_gen && !simulator->catalog_file) {
    throw ConfigError("simulator needs a catalog generator or catalog_file");
  }
}

void write_pathway(const Pathway& pathway, std::ostream& out) {
  json header;
  header["config_digest"] = pathway.config_digest;
  header["seed"] = pathway.seed;
  header["schema_version"] = kPathwaySchemaVersion;
  out << header.dump() << "\n";
  for (const auto& record : pathway.records) {
    out << record_to_json(record).dump() << "\n";
  }
}

void write_pathway_file(const Pathway& pathway, const std::string& path) {
  auto out = open_output(path);
  write_pathway(pathway, out);
}

Pathway read_pathway(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("pathway file is empty");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() ||
      !header.contains("schema_version")) {
    throw FormatError("pathway header is malformed");
  }
  if (header["schema_version"].get<int>() != kPathwaySchemaVersion) {
    throw FormatError("unsupported pathway schema_version " +
                      header["schema_version"].dump());
  }
  Pathway pathway;
  pathway.config_digest = header.value("config_digest", std::string{});
  pathway.seed = header.value("seed", std::uint64_t{0});
  long long last_good = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw FormatError("truncated or corrupt pathway record", last_good);
    }
    StepRecord record;
    try {
      record = record_from_json(j);
    } catch (const json::exception&) {
      throw FormatError("truncated or corrupt pathway record", last_good);
    }
    if (record.step != static_cast<int>(pathway.records.size())) {
      throw FormatError("pathway steps are not consecutive from 0", last_good);
    }
    last_good = record.step;
    pathway.records.push_back(std::move(record));
  }
  return pathway;
}

Pathway read_pathway_file(const std::string& path) {
  auto in = open_input(path);
  return read_pathway(in);
}

ExperimentConfig load_config(std::istream& in) {
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("config is not a JSON object");
  }
  ExperimentConfig c;
  try {
    c.mode = mode_from_name(j.at("mode").get<std::string>());
    const json& goal = j.at("goal");
    c.goal.topic.level = goal.at("topic").get<int>();
    c.goal.sentiment.level = goal.at("sentiment").get<int>();
    c.goal.topic_label = goal.at("topic_label").get<std::string>();
    c.horizon_T = j.value("horizon_T", c.mode == Mode::Controlled ? 200 : 1000);
    c.min_train_steps = j.value("min_train_steps", 100);
    c.stop_likes_needed = j.value("stop_likes_needed", 4);
    c.stop_window = j.value("stop_window", 10);
    c.test_steps = j.value("test_steps", 50);
    c.like_threshold = j.value("like_threshold", 0.5);
    if (j.contains("dimensions")) {
      c.dimensions = dimensions_from_name(j["dimensions"].get<std::string>());
    }
    c.alpha = j.value("alpha", 0.1);
    c.gamma = j.value("gamma", 0.9);
    c.epsilon = j.value("epsilon", 0.1);
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("classifier")) {
      const json& cls = j["classifier"];
      const std::string kind = cls.at("kind").get<std::string>();
      if (kind == "oracle") {
        c.classifier.mode = ClassifierMode::Oracle;
        c.classifier.noise_sigma = cls.value("noise_sigma", 0.05);
      } else if (kind == "keyword") {
        c.classifier.mode = ClassifierMode::Keyword;
        c.lexicon_file = cls.at("lexicon_file").get<std::string>();
        c.classifier.lexicon = load_lexicon_file(*c.lexicon_file);
      } else if (kind == "external") {
        c.classifier.mode = ClassifierMode::External;
      } else {
        throw ConfigError("unknown classifier kind: " + kind);
      }
    } else {
      c.classifier.mode = ClassifierMode::Oracle;
      c.classifier.noise_sigma = 0.05;
    }
    if (j.contains("simulator")) {
      SimConfig sim;
      const json& s = j["simulator"];
      if (s.contains("params")) sim.params = sim_params_from_json(s["params"]);
      if (s.contains("catalog")) {
        sim.catalog_gen = catalog_gen_from_json(s["catalog"]);
      }
      if (s.contains("catalog_file")) {
        sim.catalog_file = s["catalog_file"].get<std::string>();
      }
      c.simulator = std::move(sim);
    }
    if (j.contains("driver")) c.driver = j["driver"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  auto in = open_input(path);
  return load_config(in);
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void write_catalog(const Catalog& catalog, std::ostream& out) {
  json header;
  header["topic_labels"] = catalog.topic_labels;
  out << header.dump() << "\n";
  for (const auto& item : catalog.items) {
    out << item_to_json(item).dump() << "\n";
  }
}

Catalog read_catalog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("catalog file is empty");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("topic_labels")) {
    throw FormatError("catalog header is malformed");
  }
  Catalog catalog;
  catalog.topic_labels = header["topic_labels"].get<std::vector<std::string>>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError("corrupt catalog line");
    catalog.items.push_back(item_from_json(j));
  }
  validate(catalog);
  return catalog;
}

Catalog read_catalog_file(const std::string& path) {
  auto in = open_input(path);
  return read_catalog(in);
}

void write_ratio_csv(const RatioCurve& curve, std::ostream& out) {
  out << "step,driven_cum,control_cum,ratio,phase\n";
  char buf[40];
  for (std::size_t i = 0; i < curve.steps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", curve.ratio[i]);
    out << curve.steps[i] << ',' << curve.driven_cumulative[i] << ','
        << curve.control_cumulative[i] << ',' << buf << ','
        << phase_name(curve.phase[i]) << "\n";
  }
}

Lexicon load_lexicon_file(const std::string& path) {
  auto in = open_input(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("lexicon is not a JSON object: " + path);
  }
  Lexicon lex = default_stoplist_only();
  try {
    if (j.contains("topics")) {
      for (const auto& [label, terms] : j["topics"].items()) {
        lex.topics[label] = terms.get<std::vector<std::string>>();
        if (lex.topics[label].empty()) {
          throw ConfigError("lexicon topic has no terms: " + label);
        }
      }
    }
    if (j.contains("negative_terms")) {
      lex.negative_terms = j["negative_terms"].get<std::vector<std::string>>();
    }
    if (j.contains("stoplist")) {
      for (const auto& tag : j["stoplist"]) {
        lex.stoplist.push_back(tag.get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad lexicon: ") + e.what());
  }
  return lex;
}

LabeledDataset read_labeled_dataset_file(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dataset file is empty");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("topic_labels")) {
    throw FormatError("dataset header is malformed");
  }
  LabeledDataset dataset;
  dataset.topic_labels =
      header["topic_labels"].get<std::vector<std::string>>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError("corrupt dataset line");
    LabeledItem labeled;
    labeled.item = item_from_json(j);
    labeled.is_on_topic = j.at("is_on_topic").get<bool>();
    labeled.is_negative = j.at("is_negative").get<bool>();
    dataset.items.push_back(std::move(labeled));
  }
  return dataset;
}

Catalog catalog_from_config(const ExperimentConfig& config) {
  if (!config.simulator) {
    throw ConfigError("config has no simulator section");
  }
  if (config.simulator->catalog_file) {
    return read_catalog_file(*config.simulator->catalog_file);
  }
  return generate_catalog(*config.simulator->catalog_gen, config.seed);
}

}  // namespace autolike
