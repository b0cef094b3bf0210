#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "autolike/classify.hpp"
#include "autolike/config.hpp"
#include "autolike/harness.hpp"
#include "autolike/types.hpp"

namespace autolike {

inline constexpr int kPathwaySchemaVersion = 1;

// Pathway JSONL: header line {"config_digest","seed","schema_version"}, then
// one canonical-JSON StepRecord per line. Byte-deterministic.
void write_pathway(const Pathway& pathway, std::ostream& out);
void write_pathway_file(const Pathway& pathway, const std::string& path);
Pathway read_pathway(std::istream& in);
Pathway read_pathway_file(const std::string& path);

// ExperimentConfig JSON. load resolves the lexicon file; the digest is an
// FNV-1a hash of the canonical serialized form.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);
std::string config_digest(const ExperimentConfig& config);

// Catalog JSONL: one ContentItem per line, preceded by a header naming the
// topic labels.
void write_catalog(const Catalog& catalog, std::ostream& out);
Catalog read_catalog(std::istream& in);
Catalog read_catalog_file(const std::string& path);

// RatioCurve CSV with header step,driven_cum,control_cum,ratio,phase.
void write_ratio_csv(const RatioCurve& curve, std::ostream& out);

Lexicon load_lexicon_file(const std::string& path);

// Labeled dataset JSONL for classifier evaluation: ContentItem fields plus
// is_on_topic / is_negative; header line names the topic labels.
struct LabeledDataset {
  std::vector<std::string> topic_labels;
  std::vector<LabeledItem> items;
};
LabeledDataset read_labeled_dataset_file(const std::string& path);

// Builds the environment named by the config (simulator only; driver
// sessions are wired up by the CLI).
Catalog catalog_from_config(const ExperimentConfig& config);

}  // namespace autolike
