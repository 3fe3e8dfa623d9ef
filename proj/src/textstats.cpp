#include "decsum/textstats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

using nlohmann::json;

namespace decsum {

TfIdfVector make_tfidf_vector(std::map<TokenId, double> weights) {
  TfIdfVector v;
  double sq = 0.0;
  for (auto it = weights.begin(); it != weights.end();) {
    if (it->second < 0.0)
      throw std::invalid_argument("tfidf weights must be non-negative");
    if (it->second == 0.0) {
      it = weights.erase(it);
      continue;
    }
    sq += it->second * it->second;
    ++it;
  }
  v.weights = std::move(weights);
  v.norm = std::sqrt(sq);
  return v;
}

std::vector<TfIdfVector> tfidf(const Meeting& meeting) {
  if (meeting.das.empty())
    throw std::invalid_argument("tfidf: meeting has no dialogue acts");
  const double n_docs = double(meeting.das.size());

  std::map<TokenId, int> df;
  std::vector<std::map<TokenId, int>> tf(meeting.das.size());
  for (std::size_t i = 0; i < meeting.das.size(); ++i) {
    for (TokenId t : meeting.das[i].tokens) tf[i][t]++;
    for (const auto& [t, _] : tf[i]) df[t]++;
  }

  std::vector<TfIdfVector> out;
  out.reserve(meeting.das.size());
  for (std::size_t i = 0; i < meeting.das.size(); ++i) {
    std::map<TokenId, double> w;
    for (const auto& [t, count] : tf[i]) {
      double idf = std::log(n_docs / double(df[t]));
      if (idf > 0.0) w[t] = double(count) * idf;
    }
    out.push_back(make_tfidf_vector(std::move(w)));
  }
  return out;
}

double cosine(const TfIdfVector& a, const TfIdfVector& b) {
  if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
  double dot = 0.0;
  auto ia = a.weights.begin();
  auto ib = b.weights.begin();
  while (ia != a.weights.end() && ib != b.weights.end()) {
    if (ia->first < ib->first) ++ia;
    else if (ib->first < ia->first) ++ib;
    else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return dot / (a.norm * b.norm);
}

TfIdfVector centroid(std::span<const TfIdfVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("centroid of empty list");
  std::map<TokenId, double> sum;
  for (const auto& v : vectors)
    for (const auto& [t, w] : v.weights) sum[t] += w;
  for (auto& [t, w] : sum) w /= double(vectors.size());
  return make_tfidf_vector(std::move(sum));
}

namespace {
double kl_term(double p, double m) {
  if (p <= 0.0) return 0.0;
  return p * std::log(p / m);
}
}  // namespace

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("js_divergence: length mismatch");
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    js += 0.5 * kl_term(p[i], m) + 0.5 * kl_term(q[i], m);
  }
  return std::max(js, 0.0);
}

ClusteringResult cluster_drdas(const std::vector<std::vector<double>>& features,
                               int k) {
  const int n = int(features.size());
  if (k < 1) throw std::invalid_argument("cluster_drdas: k must be >= 1");
  if (k > n)
    throw std::invalid_argument("cluster_drdas: k=" + std::to_string(k) +
                                " exceeds number of DRDAs " + std::to_string(n));

  // pairwise similarity, symmetric
  std::vector<std::vector<double>> sim(std::size_t(n),
                                       std::vector<double>(std::size_t(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 1.0 - js_divergence(features[std::size_t(i)],
                                     features[std::size_t(j)]);
      sim[std::size_t(i)][std::size_t(j)] = s;
      sim[std::size_t(j)][std::size_t(i)] = s;
    }

  ClusteringResult result;
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({i});

  while (int(clusters.size()) > k) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double total = 0.0;
        for (int a : clusters[i])
          for (int b : clusters[j]) total += sim[std::size_t(a)][std::size_t(b)];
        double avg = total / double(clusters[i].size() * clusters[j].size());
        // clusters stay sorted by lowest member, so scanning i<j in order
        // realizes the lowest-(index,index) tie break
        if (avg > best) {
          best = avg;
          bi = i;
          bj = j;
        }
      }
    }
    result.linkage_trace.push_back(
        MergeRecord{clusters[bi].front(), clusters[bj].front(), best});
    auto merged = clusters[bi];
    merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + long(bj));
    clusters[bi] = std::move(merged);
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  result.clusters = std::move(clusters);
  return result;
}

std::string clustering_to_json(const ClusteringResult& result) {
  json j;
  j["clusters"] = result.clusters;
  j["linkage_trace"] = json::array();
  for (const auto& m : result.linkage_trace)
    j["linkage_trace"].push_back({{"a", m.a}, {"b", m.b}, {"similarity", m.similarity}});
  return j.dump(2);
}

ClusteringResult clustering_from_json(const std::string& text) {
  json j = json::parse(text);
  ClusteringResult r;
  r.clusters = j.at("clusters").get<std::vector<std::vector<int>>>();
  for (const auto& m : j.at("linkage_trace"))
    r.linkage_trace.push_back(MergeRecord{m.at("a").get<int>(), m.at("b").get<int>(),
                                          m.at("similarity").get<double>()});
  return r;
}

}  // namespace decsum
