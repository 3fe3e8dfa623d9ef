#include "decsum/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "decsum/porter.hpp"
#include "decsum/textstats.hpp"
#include "decsum/util.hpp"
#include "json.hpp"

using nlohmann::json;

namespace decsum {

namespace {

int argmax_lowest(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < int(v.size()); ++i)
    if (v[std::size_t(i)] > v[std::size_t(best)]) best = i;
  return best;
}

void require_row(const TopicModelPosterior& posterior, const Corpus& corpus,
                 DaRef ref) {
  if (!posterior.has_row(ref))
    throw std::runtime_error("DA missing from posterior: " +
                             corpus.da_name(ref));
}

void require_vocab(const TopicModelPosterior& posterior, const Corpus& corpus) {
  if (posterior.p_word_given_topic.empty() ||
      posterior.p_word_given_topic.front().size() < corpus.vocabulary.size())
    throw std::runtime_error(
        "posterior word distributions do not cover the corpus vocabulary");
}

// P(T|DA,w) for every topic; uniform when the joint mass is zero
std::vector<double> topic_given_da_word(const TopicModelPosterior& posterior,
                                        std::span<const double> da_row,
                                        TokenId w) {
  const std::size_t K = da_row.size();
  std::vector<double> joint(K);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    joint[k] = posterior.p_word_given_topic[k][std::size_t(w)] * da_row[k];
    total += joint[k];
  }
  if (total <= 0.0) {
    std::fill(joint.begin(), joint.end(), 1.0 / double(K));
    return joint;
  }
  for (auto& x : joint) x /= total;
  return joint;
}

}  // namespace

std::vector<DaRef> cluster_das(const DecisionCluster& cluster) {
  std::set<DaRef> seen;
  std::vector<DaRef> out;
  for (DaRef ref : cluster.center_das)
    if (seen.insert(ref).second) out.push_back(ref);
  for (const auto& [ctx, center] : cluster.context_das)
    if (seen.insert(ctx).second) out.push_back(ctx);
  std::sort(out.begin(), out.end());
  return out;
}

SummaryResult domsum(const DecisionCluster& cluster, const Corpus& corpus,
                     const TopicModelPosterior& posterior) {
  if (cluster.center_das.empty())
    throw std::invalid_argument("domsum: cluster " + cluster.decision_id +
                                " has no center DAs");
  require_vocab(posterior, corpus);

  struct Unit {
    DaRef da;
    DaRef dom_source;
  };
  std::vector<Unit> units;
  for (DaRef ref : cluster.center_das) units.push_back({ref, ref});
  for (const auto& [ctx, center] : cluster.context_das)
    units.push_back(
        {ctx, cluster.word_mode == WordMode::kOne ? center : ctx});
  std::stable_sort(units.begin(), units.end(),
                   [](const Unit& a, const Unit& b) { return a.da < b.da; });

  SummaryResult result;
  result.decision_id = cluster.decision_id;
  result.mode = SummaryMode::kTokenLevel;

  std::unordered_set<TokenId> emitted;
  for (const Unit& unit : units) {
    require_row(posterior, corpus, unit.da);
    require_row(posterior, corpus, unit.dom_source);
    const auto da_row = posterior.topic_row(unit.da);
    const int dom_topic = argmax_lowest(posterior.topic_row(unit.dom_source));
    for (TokenId w : corpus.da(unit.da).tokens) {
      if (corpus.is_stopword(w)) continue;
      if (emitted.count(w)) continue;
      std::vector<double> joint(da_row.size());
      for (std::size_t k = 0; k < da_row.size(); ++k)
        joint[k] = posterior.p_word_given_topic[k][std::size_t(w)] * da_row[k];
      if (argmax_lowest(joint) != dom_topic) continue;
      emitted.insert(w);
      result.tokens.push_back(corpus.vocabulary.token(w));
      result.provenance.push_back(TokenProvenance{unit.da, dom_topic});
    }
  }
  return result;
}

DecisionCluster attach_context(const DecisionCluster& cluster,
                               const Corpus& corpus, ContextKind kind,
                               WordMode word_mode,
                               const ContextOptions& options) {
  DecisionCluster out = cluster;
  out.word_mode = word_mode;
  std::set<DaRef> centers(cluster.center_das.begin(), cluster.center_das.end());

  std::map<int, std::vector<TfIdfVector>> tfidf_cache;
  auto meeting_vectors = [&](int mi) -> const std::vector<TfIdfVector>& {
    auto it = tfidf_cache.find(mi);
    if (it == tfidf_cache.end())
      it = tfidf_cache.emplace(mi, tfidf(corpus.meetings[std::size_t(mi)])).first;
    return it->second;
  };

  for (DaRef center : cluster.center_das) {
    const auto& meeting = corpus.meetings[std::size_t(center.meeting)];
    const int num_das = int(meeting.das.size());
    if (kind == ContextKind::kAdjacent) {
      int lo = std::max(0, center.da - options.adjacent_before);
      int hi = std::min(num_das - 1, center.da + options.adjacent_after);
      for (int i = lo; i <= hi; ++i) {
        if (i == center.da) continue;
        DaRef ctx{center.meeting, i};
        if (centers.count(ctx)) continue;
        out.context_das.emplace_back(ctx, center);
      }
    } else {
      const auto& vectors = meeting_vectors(center.meeting);
      const auto& center_vec = vectors[std::size_t(center.da)];
      std::vector<std::pair<double, int>> ranked;
      for (int i = 0; i < num_das; ++i) {
        DaRef ctx{center.meeting, i};
        if (i == center.da || centers.count(ctx)) continue;
        ranked.emplace_back(cosine(center_vec, vectors[std::size_t(i)]), i);
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      int take = std::min<int>(options.tfidf_count, int(ranked.size()));
      for (int i = 0; i < take; ++i)
        out.context_das.emplace_back(DaRef{center.meeting, ranked[std::size_t(i)].second},
                                     center);
    }
  }
  return out;
}

std::vector<double> p_topic_given_cluster(const DecisionCluster& cluster,
                                          const Corpus& corpus,
                                          const TopicModelPosterior& posterior) {
  auto das = cluster_das(cluster);
  if (das.empty())
    throw std::invalid_argument("p_topic_given_cluster: empty cluster");
  const std::size_t K = std::size_t(posterior.num_topics());
  std::vector<double> acc(K, 0.0);
  double total_weight = 0.0;
  for (DaRef ref : das) {
    require_row(posterior, corpus, ref);
    double w = double(corpus.da(ref).tokens.size());
    auto row = posterior.topic_row(ref);
    for (std::size_t k = 0; k < K; ++k) acc[k] += w * row[k];
    total_weight += w;
  }
  if (total_weight == 0.0) {
    // all DAs empty: fall back to the unweighted mean
    for (DaRef ref : das) {
      auto row = posterior.topic_row(ref);
      for (std::size_t k = 0; k < K; ++k) acc[k] += row[k];
    }
    total_weight = double(das.size());
  }
  double sum = 0.0;
  for (auto& x : acc) sum += x;
  for (auto& x : acc) x = sum > 0 ? x / sum : 1.0 / double(K);
  return acc;
}

namespace {

// rows of P(T|DA,w) summed over a DA's tokens, one entry per topic
std::vector<double> posterior_token_sums(const TopicModelPosterior& posterior,
                                         const Corpus& corpus, DaRef ref) {
  auto row = posterior.topic_row(ref);
  std::vector<double> sums(row.size(), 0.0);
  for (TokenId w : corpus.da(ref).tokens) {
    auto p = topic_given_da_word(posterior, row, w);
    for (std::size_t k = 0; k < p.size(); ++k) sums[k] += p[k];
  }
  return sums;
}

}  // namespace

std::vector<double> score_onetopic(const DecisionCluster& cluster,
                                   const Corpus& corpus,
                                   const TopicModelPosterior& posterior) {
  auto das = cluster_das(cluster);
  if (das.empty()) throw std::invalid_argument("score_onetopic: empty cluster");
  require_vocab(posterior, corpus);
  auto pc = p_topic_given_cluster(cluster, corpus, posterior);
  const std::size_t central = std::size_t(argmax_lowest(pc));

  std::vector<double> numer(das.size(), 0.0);
  double denom = 0.0;
  for (std::size_t i = 0; i < das.size(); ++i) {
    require_row(posterior, corpus, das[i]);
    numer[i] = posterior_token_sums(posterior, corpus, das[i])[central];
    denom += numer[i];
  }
  if (denom <= 0.0)
    return std::vector<double>(das.size(), 1.0 / double(das.size()));
  for (auto& x : numer) x /= denom;
  return numer;
}

std::vector<double> score_multitopic(const DecisionCluster& cluster,
                                     const Corpus& corpus,
                                     const TopicModelPosterior& posterior) {
  auto das = cluster_das(cluster);
  if (das.empty())
    throw std::invalid_argument("score_multitopic: empty cluster");
  require_vocab(posterior, corpus);
  auto pc = p_topic_given_cluster(cluster, corpus, posterior);
  const std::size_t K = pc.size();

  std::vector<std::vector<double>> sums(das.size());
  for (std::size_t i = 0; i < das.size(); ++i)
    sums[i] = posterior_token_sums(posterior, corpus, das[i]);

  std::vector<double> scores(das.size(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double denom = 0.0;
    for (std::size_t i = 0; i < das.size(); ++i) denom += sums[i][k];
    if (denom <= 0.0) continue;
    for (std::size_t i = 0; i < das.size(); ++i)
      scores[i] += pc[k] * sums[i][k] / denom;
  }
  double total = 0.0;
  for (double s : scores) total += s;
  if (total <= 0.0)
    return std::vector<double>(das.size(), 1.0 / double(das.size()));
  for (auto& s : scores) s /= total;
  return scores;
}

std::vector<double> score_tmm(const DecisionCluster& cluster,
                              const Corpus& corpus,
                              const TopicModelPosterior& posterior) {
  auto das = cluster_das(cluster);
  if (das.empty()) throw std::invalid_argument("score_tmm: empty cluster");
  require_vocab(posterior, corpus);

  std::vector<TokenId> cluster_tokens;  // with multiplicity
  for (DaRef ref : das)
    for (TokenId w : corpus.da(ref).tokens) cluster_tokens.push_back(w);

  std::vector<double> scores(das.size(), 0.0);
  bool floored = false;
  for (std::size_t i = 0; i < das.size(); ++i) {
    require_row(posterior, corpus, das[i]);
    auto row = posterior.topic_row(das[i]);
    double log_p = 0.0;
    for (TokenId w : cluster_tokens) {
      double p = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k)
        p += posterior.p_word_given_topic[k][std::size_t(w)] * row[k];
      if (p < 1e-300) {
        p = 1e-300;
        floored = true;
      }
      log_p += std::log(p);
    }
    scores[i] = log_p;
  }
  if (floored)
    log_warn("score_tmm: zero-probability cluster word floored at 1e-300 (" +
             cluster.decision_id + ")");
  return scores;
}

namespace {

double kl_divergence_smoothed(std::span<const double> p,
                              std::span<const double> q) {
  constexpr double kSmooth = 1e-6;
  double psum = 0.0, qsum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    psum += p[i] + kSmooth;
    qsum += q[i] + kSmooth;
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = (p[i] + kSmooth) / psum;
    double qi = (q[i] + kSmooth) / qsum;
    kl += pi * std::log(pi / qi);
  }
  return kl;
}

}  // namespace

std::vector<DaRef> klsum_select(const DecisionCluster& cluster,
                                const Corpus& corpus,
                                const TopicModelPosterior& posterior,
                                int token_budget) {
  auto das = cluster_das(cluster);
  if (das.empty()) throw std::invalid_argument("klsum_select: empty cluster");
  auto pc = p_topic_given_cluster(cluster, corpus, posterior);
  const std::size_t K = pc.size();

  std::vector<int> lengths(das.size());
  std::vector<std::span<const double>> rows(das.size());
  for (std::size_t i = 0; i < das.size(); ++i) {
    require_row(posterior, corpus, das[i]);
    lengths[i] = int(corpus.da(das[i]).tokens.size());
    rows[i] = posterior.topic_row(das[i]);
  }

  std::vector<bool> picked(das.size(), false);
  std::vector<DaRef> selection;
  std::vector<double> acc(K, 0.0);  // token-weighted sum over selected rows
  double acc_weight = 0.0;
  int used = 0;
  double current_kl = std::numeric_limits<double>::infinity();

  while (true) {
    int best = -1;
    double best_kl = current_kl;
    for (std::size_t i = 0; i < das.size(); ++i) {
      if (picked[i] || used + lengths[i] > token_budget) continue;
      std::vector<double> cand(K);
      double w = double(lengths[i]);
      double denom = acc_weight + w;
      for (std::size_t k = 0; k < K; ++k)
        cand[k] = denom > 0 ? (acc[k] + w * rows[i][k]) / denom : 0.0;
      double kl = kl_divergence_smoothed(pc, cand);
      if (kl < best_kl) {
        best_kl = kl;
        best = int(i);
      }
    }
    if (best < 0) break;
    picked[std::size_t(best)] = true;
    selection.push_back(das[std::size_t(best)]);
    double w = double(lengths[std::size_t(best)]);
    for (std::size_t k = 0; k < K; ++k) acc[k] += w * rows[std::size_t(best)][k];
    acc_weight += w;
    used += lengths[std::size_t(best)];
    current_kl = best_kl;
  }
  if (selection.empty())
    log_warn("klsum_select: no DA fits the token budget for cluster " +
             cluster.decision_id);
  return selection;
}

SummaryResult baseline_longest(const DecisionCluster& cluster,
                               const Corpus& corpus) {
  if (cluster.center_das.empty())
    throw std::invalid_argument("baseline_longest: cluster " +
                                cluster.decision_id + " has no center DAs");
  DaRef best = cluster.center_das.front();
  std::size_t best_len = corpus.da(best).tokens.size();
  for (DaRef ref : cluster.center_das) {
    std::size_t len = corpus.da(ref).tokens.size();
    if (len > best_len || (len == best_len && ref < best)) {
      best = ref;
      best_len = len;
    }
  }
  SummaryResult result;
  result.decision_id = cluster.decision_id;
  result.mode = SummaryMode::kUtteranceLevel;
  result.selected_das = {best};
  return result;
}

SummaryResult baseline_prototype(const DecisionCluster& cluster,
                                 const Corpus& corpus) {
  if (cluster.center_das.empty())
    throw std::invalid_argument("baseline_prototype: cluster " +
                                cluster.decision_id + " has no center DAs");

  std::map<int, std::vector<TfIdfVector>> cache;
  auto vec_of = [&](DaRef ref) -> const TfIdfVector& {
    auto it = cache.find(ref.meeting);
    if (it == cache.end())
      it = cache.emplace(ref.meeting, tfidf(corpus.meetings[std::size_t(ref.meeting)]))
               .first;
    return it->second[std::size_t(ref.da)];
  };

  std::vector<TfIdfVector> members;
  bool any_nonzero = false;
  for (DaRef ref : cluster.center_das) {
    members.push_back(vec_of(ref));
    if (members.back().norm > 0) any_nonzero = true;
  }
  if (!any_nonzero) {
    log_warn("baseline_prototype: all-zero TF-IDF vectors in cluster " +
             cluster.decision_id + "; falling back to longest DA");
    return baseline_longest(cluster, corpus);
  }

  TfIdfVector center = centroid(members);
  DaRef best = cluster.center_das.front();
  double best_sim = -1.0;
  for (std::size_t i = 0; i < cluster.center_das.size(); ++i) {
    double sim = cosine(members[i], center);
    if (sim > best_sim) {
      best_sim = sim;
      best = cluster.center_das[i];
    }
  }
  SummaryResult result;
  result.decision_id = cluster.decision_id;
  result.mode = SummaryMode::kUtteranceLevel;
  result.selected_das = {best};
  return result;
}

SummaryResult upperbound(const DecisionCluster& cluster, const Corpus& corpus,
                         const Decision& gold) {
  if (gold.abstract_tokens.empty())
    throw std::invalid_argument("upperbound: empty gold abstract for " +
                                gold.decision_id);
  std::unordered_set<std::string> gold_stems;
  for (const auto& tok : gold.abstract_tokens) {
    if (corpus.stopword_strings.count(tok)) continue;
    gold_stems.insert(porter_stem(tok));
  }

  SummaryResult result;
  result.decision_id = cluster.decision_id;
  result.mode = SummaryMode::kTokenLevel;
  std::unordered_set<std::string> used;
  for (DaRef ref : cluster_das(cluster)) {
    for (TokenId w : corpus.da(ref).tokens) {
      if (corpus.is_stopword(w)) continue;
      const std::string& tok = corpus.vocabulary.token(w);
      std::string stem = porter_stem(tok);
      if (!gold_stems.count(stem) || used.count(stem)) continue;
      used.insert(stem);
      result.tokens.push_back(tok);
      result.provenance.push_back(TokenProvenance{ref, -1});
    }
  }
  return result;
}

std::vector<DaRef> top_das(const DecisionCluster& cluster,
                           const std::vector<double>& scores, int n) {
  auto das = cluster_das(cluster);
  if (scores.size() != das.size())
    throw std::invalid_argument("top_das: score vector length mismatch");
  std::vector<std::size_t> order(das.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<DaRef> out;
  for (std::size_t i = 0; i < order.size() && int(out.size()) < n; ++i)
    out.push_back(das[order[i]]);
  return out;
}

std::string summary_to_json(const SummaryResult& s, const Corpus& corpus) {
  json j;
  j["decision_id"] = s.decision_id;
  j["mode"] = s.mode == SummaryMode::kTokenLevel ? "token" : "utterance";
  j["tokens"] = s.tokens;
  j["das"] = json::array();
  for (DaRef ref : s.selected_das) j["das"].push_back(corpus.da_name(ref));
  j["provenance"] = json::array();
  for (const auto& p : s.provenance)
    j["provenance"].push_back(
        {{"da", corpus.da_name(p.source)}, {"topic", p.topic}});
  return j.dump();
}

}  // namespace decsum
