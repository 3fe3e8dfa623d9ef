#include "decsum/rouge.hpp"

#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "decsum/porter.hpp"

namespace decsum {

std::string to_string(RougeVariant v) {
  switch (v) {
    case RougeVariant::kRouge1: return "R1";
    case RougeVariant::kRouge2: return "R2";
    case RougeVariant::kRougeSu4: return "SU4";
  }
  return "?";
}

RougeVariant rouge_variant_from_string(const std::string& name) {
  if (name == "R1") return RougeVariant::kRouge1;
  if (name == "R2") return RougeVariant::kRouge2;
  if (name == "SU4") return RougeVariant::kRougeSu4;
  throw std::invalid_argument("unknown ROUGE variant: " + name);
}

std::vector<std::string> preprocess_for_rouge(
    std::span<const std::string> tokens, const RougeConfig& config,
    const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (config.remove_stopwords && stopwords.count(tok)) continue;
    out.push_back(config.stem ? porter_stem(tok) : tok);
  }
  return out;
}

namespace {

double f1_of(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

RougeScore from_counts(double match, double sys_units, double ref_units) {
  RougeScore s;
  s.match = match;
  s.sys_units = sys_units;
  s.ref_units = ref_units;
  s.precision = sys_units > 0.0 ? match / sys_units : 0.0;
  s.recall = ref_units > 0.0 ? match / ref_units : 0.0;
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

using UnitCounts = std::unordered_map<std::string, int>;

double clipped_overlap(const UnitCounts& sys, const UnitCounts& ref) {
  double match = 0.0;
  for (const auto& [unit, count] : sys) {
    auto it = ref.find(unit);
    if (it != ref.end()) match += std::min(count, it->second);
  }
  return match;
}

UnitCounts ngram_counts(std::span<const std::string> tokens, int n,
                        std::size_t* total) {
  UnitCounts counts;
  *total = 0;
  if (int(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + std::size_t(n) <= tokens.size(); ++i) {
    std::string unit = tokens[i];
    for (int j = 1; j < n; ++j) {
      unit += '\x1f';
      unit += tokens[i + std::size_t(j)];
    }
    counts[unit]++;
    (*total)++;
  }
  return counts;
}

// skip-bigrams with at most max_skip tokens between the two members, plus
// unigrams; unigram units are tagged so they never collide with pairs
UnitCounts su_counts(std::span<const std::string> tokens, int max_skip,
                     std::size_t* total) {
  UnitCounts counts;
  *total = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    counts["u\x1f" + tokens[i]]++;
    (*total)++;
    for (std::size_t j = i + 1;
         j < tokens.size() && j - i - 1 <= std::size_t(max_skip); ++j) {
      counts["s\x1f" + tokens[i] + '\x1f' + tokens[j]]++;
      (*total)++;
    }
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> system,
                   std::span<const std::string> reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  std::size_t sys_total = 0, ref_total = 0;
  auto sys = ngram_counts(system, n, &sys_total);
  auto ref = ngram_counts(reference, n, &ref_total);
  return from_counts(clipped_overlap(sys, ref), double(sys_total),
                     double(ref_total));
}

RougeScore rouge_su4(std::span<const std::string> system,
                     std::span<const std::string> reference, int max_skip) {
  if (max_skip < 0) throw std::invalid_argument("rouge_su4: max_skip >= 0");
  std::size_t sys_total = 0, ref_total = 0;
  auto sys = su_counts(system, max_skip, &sys_total);
  auto ref = su_counts(reference, max_skip, &ref_total);
  return from_counts(clipped_overlap(sys, ref), double(sys_total),
                     double(ref_total));
}

RougeScore score_variant(RougeVariant v, std::span<const std::string> system,
                         std::span<const std::string> reference,
                         const RougeConfig& config) {
  switch (v) {
    case RougeVariant::kRouge1: return rouge_n(system, reference, 1);
    case RougeVariant::kRouge2: return rouge_n(system, reference, 2);
    case RougeVariant::kRougeSu4:
      return rouge_su4(system, reference, config.su4_max_skip);
  }
  throw std::logic_error("unreachable");
}

RougeReport aggregate(const std::vector<DecisionRouge>& per_decision) {
  if (per_decision.empty())
    throw std::invalid_argument("aggregate: no per-decision reports");
  RougeReport report;
  report.per_decision = per_decision;
  for (const auto& dec : per_decision) {
    for (const auto& [variant, score] : dec.scores) {
      auto& macro = report.macro[variant];
      macro.precision += score.precision;
      macro.recall += score.recall;
      macro.f1 += score.f1;
      auto& micro = report.micro[variant];
      micro.match += score.match;
      micro.sys_units += score.sys_units;
      micro.ref_units += score.ref_units;
    }
  }
  const double n = double(per_decision.size());
  for (auto& [variant, score] : report.macro) {
    score.precision /= n;
    score.recall /= n;
    score.f1 /= n;
  }
  for (auto& [variant, score] : report.micro) {
    score.precision = score.sys_units > 0 ? score.match / score.sys_units : 0.0;
    score.recall = score.ref_units > 0 ? score.match / score.ref_units : 0.0;
    score.f1 = f1_of(score.precision, score.recall);
  }
  return report;
}

std::string report_to_csv(const RougeReport& report) {
  std::string out = "decision_id,variant,precision,recall,f1\n";
  char buf[160];
  auto emit = [&](const std::string& id, RougeVariant v, const RougeScore& s) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f\n", id.c_str(),
                  to_string(v).c_str(), s.precision, s.recall, s.f1);
    out += buf;
  };
  for (const auto& dec : report.per_decision)
    for (const auto& [variant, score] : dec.scores)
      emit(dec.decision_id, variant, score);
  for (const auto& [variant, score] : report.macro)
    emit("AGGREGATE_MACRO", variant, score);
  for (const auto& [variant, score] : report.micro)
    emit("AGGREGATE_MICRO", variant, score);
  return out;
}

}  // namespace decsum
