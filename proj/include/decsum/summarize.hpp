#pragma once

#include <string>
#include <vector>

#include "decsum/corpus.hpp"
#include "decsum/topic_models.hpp"

namespace decsum {

enum class SummaryMode { kTokenLevel, kUtteranceLevel };

struct TokenProvenance {
  DaRef source;
  int topic = -1;  // dominant topic that admitted the token; -1 when n/a
};

struct SummaryResult {
  std::string decision_id;
  SummaryMode mode = SummaryMode::kTokenLevel;
  std::vector<std::string> tokens;          // distinct, first-occurrence order
  std::vector<DaRef> selected_das;          // utterance-level selections
  std::vector<TokenProvenance> provenance;  // parallel to tokens
};

std::string summary_to_json(const SummaryResult& s, const Corpus& corpus);

// All DAs of a cluster (centers and contexts) in temporal order, deduplicated.
std::vector<DaRef> cluster_das(const DecisionCluster& cluster);

// Token-level extraction: keep the words of each DA whose most probable
// topic under P(w|T)P(T|DA) equals the DA's dominant topic. For context DAs
// under WordMode::kOne the dominant topic of the center DA is used instead.
// Stopwords are never candidates. Output is the union across DAs in
// first-occurrence order.
SummaryResult domsum(const DecisionCluster& cluster, const Corpus& corpus,
                     const TopicModelPosterior& posterior);

enum class ContextKind { kAdjacent, kTfIdf };

struct ContextOptions {
  int adjacent_before = 5;
  int adjacent_after = 5;
  int tfidf_count = 10;
};

// Returns a copy of the cluster with context DAs attached per center DA.
DecisionCluster attach_context(const DecisionCluster& cluster,
                               const Corpus& corpus, ContextKind kind,
                               WordMode word_mode,
                               const ContextOptions& options = {});

// Token-count-weighted mean of P(T|DA) over the cluster's DAs, normalized.
std::vector<double> p_topic_given_cluster(const DecisionCluster& cluster,
                                          const Corpus& corpus,
                                          const TopicModelPosterior& posterior);

// Utterance scores, parallel to cluster_das(cluster).
std::vector<double> score_onetopic(const DecisionCluster& cluster,
                                   const Corpus& corpus,
                                   const TopicModelPosterior& posterior);
std::vector<double> score_multitopic(const DecisionCluster& cluster,
                                     const Corpus& corpus,
                                     const TopicModelPosterior& posterior);
// log P(C|DA); larger is better.
std::vector<double> score_tmm(const DecisionCluster& cluster,
                              const Corpus& corpus,
                              const TopicModelPosterior& posterior);

// Greedy KL(P_C || P_S) minimization under a token budget. Returns picks in
// selection order.
std::vector<DaRef> klsum_select(const DecisionCluster& cluster,
                                const Corpus& corpus,
                                const TopicModelPosterior& posterior,
                                int token_budget);

SummaryResult baseline_longest(const DecisionCluster& cluster,
                               const Corpus& corpus);
SummaryResult baseline_prototype(const DecisionCluster& cluster,
                                 const Corpus& corpus);

// Extractive ceiling: cluster word types whose stem matches a stemmed,
// non-stopword token of the gold abstract; one summary token per gold stem.
SummaryResult upperbound(const DecisionCluster& cluster, const Corpus& corpus,
                         const Decision& gold);

// Top-n DAs by score (descending; ties toward the earlier DA).
std::vector<DaRef> top_das(const DecisionCluster& cluster,
                           const std::vector<double>& scores, int n);

}  // namespace decsum
