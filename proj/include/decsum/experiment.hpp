#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decsum/corpus.hpp"
#include "decsum/rouge.hpp"
#include "decsum/summarize.hpp"
#include "decsum/topic_models.hpp"

namespace decsum {

struct MethodSpec {
  enum class Kind {
    kDomsum,
    kOneTopic,
    kMultiTopic,
    kTmmSum,
    kKlSum,
    kLongest,
    kPrototype,
    kUpperbound,
  };
  Kind kind = Kind::kDomsum;
  bool with_context = false;  // domsum only
  ContextKind context_kind = ContextKind::kAdjacent;
  WordMode word_mode = WordMode::kOne;

  std::string name() const;       // canonical, e.g. "domsum+context(adjacent,one)"
  std::string file_tag() const;   // filesystem-safe form
  bool model_dependent() const;
};

// Accepts: domsum, domsum+context(adjacent|tfidf, one|multi), onetopic,
// multitopic, tmmsum, klsum, longest, prototype, upperbound.
MethodSpec parse_method(const std::string& name);

struct ClusteringConfig {
  enum class Source { kTrue, kSystem };
  Source source = Source::kTrue;
  ModelConfig feature_model;  // distributions that drive system clustering
};

struct ExperimentConfig {
  std::string corpus_dir;
  PreprocessConfig preprocess;
  std::vector<ModelConfig> models;
  ClusteringConfig clustering;
  std::vector<std::string> method_names;
  RougeConfig rouge;
  ContextOptions context;
  int klsum_budget = 40;
  int utterance_top_n = 1;
  std::string output_dir;
  std::uint64_t seed = 1;
};

ExperimentConfig load_experiment_config(
    const std::string& path,
    std::optional<std::uint64_t> seed_override = std::nullopt,
    std::optional<std::string> output_override = std::nullopt);

// All problems at once; empty result means the config is runnable.
std::vector<std::string> validate(const ExperimentConfig& config);

struct ManifestEntry {
  std::string path;      // relative to output_dir
  std::string fnv1a64;   // hex content hash
};

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::string status;  // "ok" or "failed"
};

struct RunManifest {
  std::vector<StageRecord> stages;
  std::vector<ManifestEntry> artifacts;
  bool failed = false;
  std::string failure;
};

// Executes the full pipeline: load, cluster, train (with posterior caching
// under output_dir/cache), summarize, score, report.
RunManifest run(const ExperimentConfig& config);

}  // namespace decsum
