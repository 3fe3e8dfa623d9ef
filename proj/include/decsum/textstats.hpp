#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "decsum/corpus.hpp"

namespace decsum {

struct TfIdfVector {
  std::map<TokenId, double> weights;  // ordered keys keep everything deterministic
  double norm = 0.0;
};

TfIdfVector make_tfidf_vector(std::map<TokenId, double> weights);

// tf * ln(N/df) with raw term counts; document unit is the DA, scope the meeting.
std::vector<TfIdfVector> tfidf(const Meeting& meeting);

double cosine(const TfIdfVector& a, const TfIdfVector& b);

TfIdfVector centroid(std::span<const TfIdfVector> vectors);

// Jensen-Shannon divergence, natural log. Inputs must be same-length
// probability vectors.
double js_divergence(std::span<const double> p, std::span<const double> q);

struct MergeRecord {
  int a = 0;  // merged cluster representatives: lowest member index each
  int b = 0;
  double similarity = 0.0;
};

struct ClusteringResult {
  std::vector<std::vector<int>> clusters;  // indices into the input list
  std::vector<MergeRecord> linkage_trace;
};

// Average-linkage agglomerative clustering under similarity 1 - JS(p, q),
// stopping when k clusters remain. Input order is temporal order; ties are
// broken toward the lowest (index, index) pair.
ClusteringResult cluster_drdas(const std::vector<std::vector<double>>& features,
                               int k);

std::string clustering_to_json(const ClusteringResult& result);
ClusteringResult clustering_from_json(const std::string& text);

}  // namespace decsum
