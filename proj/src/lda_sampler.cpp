#include "decsum/rng.hpp"
#include "sampler_internal.hpp"

// LDA and Local LDA share one sampler; they differ only in what counts as a
// document (the meeting vs. the single DA).

namespace decsum::internal {
namespace {

class LdaSampler final : public GibbsSampler {
 public:
  LdaSampler(const Corpus& corpus, const ModelConfig& config)
      : corpus_(corpus),
        cfg_(config),
        K_(config.num_topics),
        V_(corpus.vocabulary.size()),
        rng_(config.seed) {
    const bool per_da = cfg_.kind == ModelKind::kLocalLda;
    int num_docs = 0;
    doc_of_.resize(corpus.meetings.size());
    for (std::size_t mi = 0; mi < corpus.meetings.size(); ++mi) {
      const auto& das = corpus.meetings[mi].das;
      doc_of_[mi].resize(das.size());
      for (std::size_t di = 0; di < das.size(); ++di)
        doc_of_[mi][di] = per_da ? num_docs + int(di) : int(mi);
      if (per_da) num_docs += int(das.size());
    }
    if (!per_da) num_docs = int(corpus.meetings.size());

    n_dk_.assign(std::size_t(num_docs), std::vector<int>(std::size_t(K_), 0));
    n_d_.assign(std::size_t(num_docs), 0);
    n_kw_.assign(std::size_t(K_), std::vector<int>(V_, 0));
    n_k_.assign(std::size_t(K_), 0);
    scores_.resize(std::size_t(K_));

    z_.resize(corpus.meetings.size());
    for (std::size_t mi = 0; mi < corpus.meetings.size(); ++mi) {
      const auto& das = corpus.meetings[mi].das;
      z_[mi].resize(das.size());
      for (std::size_t di = 0; di < das.size(); ++di) {
        z_[mi][di].resize(das[di].tokens.size());
        int doc = doc_of_[mi][di];
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          int k = draw(doc, das[di].tokens[ti]);
          z_[mi][di][ti] = k;
          increment(doc, das[di].tokens[ti], k);
        }
      }
    }
  }

  void sweep() override {
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      for (std::size_t di = 0; di < das.size(); ++di) {
        int doc = doc_of_[mi][di];
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          TokenId w = das[di].tokens[ti];
          decrement(doc, w, z_[mi][di][ti]);
          int k = draw(doc, w);
          z_[mi][di][ti] = k;
          increment(doc, w, k);
        }
      }
    }
  }

  void audit() const override {
    std::vector<std::vector<int>> ndk(n_dk_.size(),
                                      std::vector<int>(std::size_t(K_), 0));
    std::vector<long long> nd(n_d_.size(), 0);
    std::vector<std::vector<int>> nkw(std::size_t(K_), std::vector<int>(V_, 0));
    std::vector<long long> nk(std::size_t(K_), 0);
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      for (std::size_t di = 0; di < das.size(); ++di) {
        int doc = doc_of_[mi][di];
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          int k = z_[mi][di][ti];
          audit_true(k >= 0 && k < K_, "topic assignment in range");
          ndk[std::size_t(doc)][std::size_t(k)]++;
          nd[std::size_t(doc)]++;
          nkw[std::size_t(k)][std::size_t(das[di].tokens[ti])]++;
          nk[std::size_t(k)]++;
        }
      }
    }
    for (std::size_t d = 0; d < n_dk_.size(); ++d) {
      audit_eq(n_d_[d], nd[d], "doc total " + std::to_string(d));
      long long row = 0;
      for (int k = 0; k < K_; ++k) {
        audit_eq(n_dk_[d][std::size_t(k)], ndk[d][std::size_t(k)],
                 "doc-topic count");
        row += n_dk_[d][std::size_t(k)];
      }
      audit_eq(row, nd[d], "doc-topic marginal");
    }
    long long total = 0;
    for (int k = 0; k < K_; ++k) {
      audit_eq(n_k_[std::size_t(k)], nk[std::size_t(k)], "topic total");
      long long row = 0;
      for (std::size_t w = 0; w < V_; ++w) {
        audit_eq(n_kw_[std::size_t(k)][w], nkw[std::size_t(k)][w],
                 "topic-word count");
        row += n_kw_[std::size_t(k)][w];
      }
      audit_eq(row, nk[std::size_t(k)], "topic-word marginal");
      total += nk[std::size_t(k)];
    }
    audit_eq(total, (long long)corpus_.total_tokens(), "corpus token total");
  }

  TopicModelPosterior estimate() const override {
    TopicModelPosterior post;
    post.config = cfg_;
    post.vocab_fingerprint = corpus_.vocabulary_fingerprint();
    post.p_topic_given_da.resize(corpus_.meetings.size());
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      post.p_topic_given_da[mi].resize(das.size());
      for (std::size_t di = 0; di < das.size(); ++di) {
        int doc = doc_of_[mi][di];
        std::vector<double> row(std::size_t(K_), 0.0);
        double denom = double(n_d_[std::size_t(doc)]) + double(K_) * cfg_.alpha;
        for (int k = 0; k < K_; ++k)
          row[std::size_t(k)] =
              (double(n_dk_[std::size_t(doc)][std::size_t(k)]) + cfg_.alpha) /
              denom;
        post.p_topic_given_da[mi][di] = std::move(row);
      }
    }
    post.p_word_given_topic.assign(std::size_t(K_), std::vector<double>(V_));
    for (int k = 0; k < K_; ++k) {
      double denom = double(n_k_[std::size_t(k)]) + double(V_) * cfg_.beta;
      for (std::size_t w = 0; w < V_; ++w)
        post.p_word_given_topic[std::size_t(k)][w] =
            (double(n_kw_[std::size_t(k)][w]) + cfg_.beta) / denom;
    }
    return post;
  }

 private:
  int draw(int doc, TokenId w) {
    for (int k = 0; k < K_; ++k)
      scores_[std::size_t(k)] =
          (double(n_dk_[std::size_t(doc)][std::size_t(k)]) + cfg_.alpha) *
          (double(n_kw_[std::size_t(k)][std::size_t(w)]) + cfg_.beta) /
          (double(n_k_[std::size_t(k)]) + double(V_) * cfg_.beta);
    return int(rng_.categorical(scores_));
  }

  void increment(int doc, TokenId w, int k) {
    n_dk_[std::size_t(doc)][std::size_t(k)]++;
    n_d_[std::size_t(doc)]++;
    n_kw_[std::size_t(k)][std::size_t(w)]++;
    n_k_[std::size_t(k)]++;
  }

  void decrement(int doc, TokenId w, int k) {
    n_dk_[std::size_t(doc)][std::size_t(k)]--;
    n_d_[std::size_t(doc)]--;
    n_kw_[std::size_t(k)][std::size_t(w)]--;
    n_k_[std::size_t(k)]--;
  }

  const Corpus& corpus_;
  ModelConfig cfg_;
  int K_;
  std::size_t V_;
  Rng rng_;

  std::vector<std::vector<int>> doc_of_;       // [meeting][da] -> document id
  std::vector<std::vector<std::vector<int>>> z_;
  std::vector<std::vector<int>> n_dk_;
  std::vector<int> n_d_;
  std::vector<std::vector<int>> n_kw_;
  std::vector<int> n_k_;
  std::vector<double> scores_;
};

}  // namespace

std::unique_ptr<GibbsSampler> make_lda_sampler(const Corpus& corpus,
                                               const ModelConfig& config) {
  return std::make_unique<LdaSampler>(corpus, config);
}

}  // namespace decsum::internal
