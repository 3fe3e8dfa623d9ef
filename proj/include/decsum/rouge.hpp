#pragma once

#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace decsum {

enum class RougeVariant { kRouge1, kRouge2, kRougeSu4 };

std::string to_string(RougeVariant v);
RougeVariant rouge_variant_from_string(const std::string& name);

struct RougeConfig {
  std::vector<RougeVariant> variants = {RougeVariant::kRouge1,
                                        RougeVariant::kRouge2,
                                        RougeVariant::kRougeSu4};
  bool stem = true;
  bool remove_stopwords = true;
  int su4_max_skip = 4;  // tokens allowed between skip-bigram members
};

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // raw unit counts kept for micro pooling
  double match = 0.0;
  double sys_units = 0.0;
  double ref_units = 0.0;
};

// Stopword removal first (if enabled), then Porter stemming (if enabled).
std::vector<std::string> preprocess_for_rouge(
    std::span<const std::string> tokens, const RougeConfig& config,
    const std::unordered_set<std::string>& stopwords);

// Clipped n-gram overlap; inputs are already preprocessed.
RougeScore rouge_n(std::span<const std::string> system,
                   std::span<const std::string> reference, int n);

// Skip-bigrams (at most max_skip intervening tokens) plus unigrams, matched
// as one combined multiset.
RougeScore rouge_su4(std::span<const std::string> system,
                     std::span<const std::string> reference, int max_skip = 4);

RougeScore score_variant(RougeVariant v, std::span<const std::string> system,
                         std::span<const std::string> reference,
                         const RougeConfig& config);

struct DecisionRouge {
  std::string decision_id;
  std::map<RougeVariant, RougeScore> scores;
};

struct RougeReport {
  std::vector<DecisionRouge> per_decision;
  std::map<RougeVariant, RougeScore> macro;  // mean P/R/F1 over decisions
  std::map<RougeVariant, RougeScore> micro;  // pooled unit counts
};

RougeReport aggregate(const std::vector<DecisionRouge>& per_decision);

std::string report_to_csv(const RougeReport& report);

}  // namespace decsum
