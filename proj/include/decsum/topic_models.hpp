#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decsum/corpus.hpp"

namespace decsum {

enum class ModelKind { kLda, kLocalLda, kMgLda, kStm };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelConfig {
  ModelKind kind = ModelKind::kLocalLda;
  int num_topics = 5;  // MG-LDA: local topic count; global count is set equal

  double alpha = 0.1;  // LDA / Local LDA document-topic prior
  double beta = 0.1;   // topic-word prior, all models

  double mg_alpha_gl = 0.1;
  double mg_alpha_loc = 0.1;
  double mg_alpha_mix = 0.1;
  double mg_alpha_mix_gl = -1.0;  // < 0: use mg_alpha_mix; 0 disables global topics
  double mg_gamma = 0.1;
  int mg_window = 3;

  double stm_alpha = 0.5;
  double stm_a = 0.1;  // PDP discount, in [0, 1)
  double stm_b = 1.0;  // PDP concentration, > -stm_a

  int iterations = 1000;
  int burn_in = 500;
  int sample_interval = 10;  // every Nth post-burn-in sweep is averaged
  std::uint64_t seed = 1;

  double mix_prior_gl() const {
    return mg_alpha_mix_gl >= 0.0 ? mg_alpha_mix_gl : mg_alpha_mix;
  }
  double mix_prior_loc() const { return mg_alpha_mix; }
};

std::vector<std::string> validate_model_config(const ModelConfig& config);

struct TopicModelPosterior {
  ModelConfig config;
  std::uint64_t vocab_fingerprint = 0;
  // [meeting][da][topic]; every row sums to 1
  std::vector<std::vector<std::vector<double>>> p_topic_given_da;
  // [topic][word]; every row sums to 1
  std::vector<std::vector<double>> p_word_given_topic;

  int num_topics() const { return config.num_topics; }
  std::span<const double> topic_row(DaRef ref) const;
  bool has_row(DaRef ref) const;
};

// One collapsed Gibbs chain. Construction initializes assignments by
// sampling each token from its conditional given the counts so far.
class GibbsSampler {
 public:
  virtual ~GibbsSampler() = default;
  virtual void sweep() = 0;
  // Recomputes every count table from the assignments and throws
  // std::logic_error on the first mismatch.
  virtual void audit() const = 0;
  virtual TopicModelPosterior estimate() const = 0;
};

std::unique_ptr<GibbsSampler> make_sampler(const Corpus& corpus,
                                           const ModelConfig& config);

// Runs `iterations` sweeps and averages every `sample_interval`-th
// post-burn-in snapshot (the final sweep if none qualified).
TopicModelPosterior train(const Corpus& corpus, const ModelConfig& config);

// Collapsed LDA conditional, exposed for direct verification. The token
// being resampled must already be decremented from all counts.
// score(k) = (n_dk[k] + alpha) * (n_kw[k] + beta) / (n_k[k] + V * beta)
std::vector<double> lda_conditional(std::span<const int> n_dk,
                                    std::span<const int> n_kw,
                                    std::span<const int> n_k, double alpha,
                                    double beta, std::size_t vocab_size);

void save_posterior(const TopicModelPosterior& posterior, const std::string& path);
TopicModelPosterior load_posterior(const std::string& path);

}  // namespace decsum
