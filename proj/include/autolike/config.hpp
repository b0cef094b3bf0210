#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "autolike/classify.hpp"
#include "autolike/sim_env.hpp"
#include "autolike/types.hpp"

namespace autolike {

struct SimConfig {
  SimParams params;
  // Either an inline generator recipe or a pre-built catalog file (JSONL).
  std::optional<CatalogGenParams> catalog_gen;
  std::optional<std::string> catalog_file;
};

struct ExperimentConfig {
  Mode mode = Mode::Streamlined;
  Goal goal;
  int horizon_T = 1000;
  int min_train_steps = 100;
  int stop_likes_needed = 4;
  int stop_window = 10;
  int test_steps = 50;
  double like_threshold = 0.5;
  Dimensions dimensions = Dimensions::TopicOnly;
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  Classifier classifier;
  std::optional<std::string> lexicon_file;  // source of classifier.lexicon
  std::optional<SimConfig> simulator;
  std::optional<std::string> driver;  // "-" for stdio, else host:port

  void validate() const;  // throws ConfigError
};

}  // namespace autolike
