#include "decsum/rng.hpp"
#include "sampler_internal.hpp"

// Segmented topic model: per-DA topic distributions are drawn from the
// meeting distribution through a two-parameter Poisson-Dirichlet process.
// Seating is kept as (customer count, table count) histograms per (DA,
// topic); tables propagate to the meeting level, where a Dirichlet(alpha)
// smoother over table counts stands in for theta_m.
//
// A token joining topic k weighs the existing-table mass (c - a*t) against
// the new-table mass (b + a*t_total) * parent(k), both times the smoothed
// word likelihood. Removal closes a table with probability t/c, clamped so
// that 1 <= t <= c holds whenever c >= 1.

namespace decsum::internal {
namespace {

class StmSampler final : public GibbsSampler {
 public:
  StmSampler(const Corpus& corpus, const ModelConfig& config)
      : corpus_(corpus),
        cfg_(config),
        K_(config.num_topics),
        V_(corpus.vocabulary.size()),
        a_(config.stm_a),
        b_(config.stm_b),
        alpha_(config.stm_alpha),
        rng_(config.seed) {
    const std::size_t M = corpus.meetings.size();
    da_offset_.resize(M);
    std::size_t num_das = 0;
    for (std::size_t mi = 0; mi < M; ++mi) {
      da_offset_[mi] = num_das;
      num_das += corpus.meetings[mi].das.size();
    }
    c_dk_.assign(num_das, std::vector<int>(std::size_t(K_), 0));
    t_dk_.assign(num_das, std::vector<int>(std::size_t(K_), 0));
    c_d_.assign(num_das, 0);
    t_d_.assign(num_das, 0);
    T_mk_.assign(M, std::vector<int>(std::size_t(K_), 0));
    T_m_.assign(M, 0);
    n_kw_.assign(std::size_t(K_), std::vector<int>(V_, 0));
    n_k_.assign(std::size_t(K_), 0);
    scores_.resize(std::size_t(K_));

    z_.resize(M);
    for (std::size_t mi = 0; mi < M; ++mi) {
      const auto& das = corpus.meetings[mi].das;
      z_[mi].resize(das.size());
      for (std::size_t di = 0; di < das.size(); ++di) {
        z_[mi][di].resize(das[di].tokens.size());
        std::size_t gd = da_offset_[mi] + di;
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          auto [k, open] = draw(mi, gd, das[di].tokens[ti]);
          z_[mi][di][ti] = k;
          add(mi, gd, das[di].tokens[ti], k, open);
        }
      }
    }
  }

  void sweep() override {
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      for (std::size_t di = 0; di < das.size(); ++di) {
        std::size_t gd = da_offset_[mi] + di;
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          TokenId w = das[di].tokens[ti];
          remove(mi, gd, w, z_[mi][di][ti]);
          auto [k, open] = draw(mi, gd, w);
          z_[mi][di][ti] = k;
          add(mi, gd, w, k, open);
        }
      }
    }
  }

  void audit() const override {
    const std::size_t M = corpus_.meetings.size();
    std::vector<std::vector<int>> ckw(std::size_t(K_), std::vector<int>(V_, 0));
    std::vector<long long> ck(std::size_t(K_), 0);
    long long total = 0;
    for (std::size_t mi = 0; mi < M; ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      std::vector<int> tmk(std::size_t(K_), 0);
      long long tm = 0;
      for (std::size_t di = 0; di < das.size(); ++di) {
        std::size_t gd = da_offset_[mi] + di;
        std::vector<int> cdk(std::size_t(K_), 0);
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          int k = z_[mi][di][ti];
          audit_true(k >= 0 && k < K_, "topic in range");
          cdk[std::size_t(k)]++;
          ckw[std::size_t(k)][std::size_t(das[di].tokens[ti])]++;
          ck[std::size_t(k)]++;
          total++;
        }
        long long cd = 0, td = 0;
        for (int k = 0; k < K_; ++k) {
          audit_eq(c_dk_[gd][std::size_t(k)], cdk[std::size_t(k)],
                   "DA-topic customer count");
          int c = c_dk_[gd][std::size_t(k)];
          int t = t_dk_[gd][std::size_t(k)];
          if (c == 0)
            audit_eq(t, 0, "tables zero when no customers");
          else
            audit_true(t >= 1 && t <= c, "1 <= tables <= customers");
          cd += c;
          td += t;
          tmk[std::size_t(k)] += t;
          tm += t;
        }
        audit_eq(c_d_[gd], cd, "DA customer total");
        audit_eq(t_d_[gd], td, "DA table total");
      }
      for (int k = 0; k < K_; ++k)
        audit_eq(T_mk_[mi][std::size_t(k)], tmk[std::size_t(k)],
                 "meeting table count");
      audit_eq(T_m_[mi], tm, "meeting table total");
    }
    for (int k = 0; k < K_; ++k) {
      audit_eq(n_k_[std::size_t(k)], ck[std::size_t(k)], "topic total");
      long long row = 0;
      for (std::size_t w = 0; w < V_; ++w) {
        audit_eq(n_kw_[std::size_t(k)][w], ckw[std::size_t(k)][w],
                 "topic-word count");
        row += ckw[std::size_t(k)][w];
      }
      audit_eq(row, ck[std::size_t(k)], "topic-word marginal");
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
        std::size_t gd = da_offset_[mi] + di;
        std::vector<double> row(std::size_t(K_), 0.0);
        double denom = b_ + double(c_d_[gd]);
        for (int k = 0; k < K_; ++k) {
          double existing = double(c_dk_[gd][std::size_t(k)]) -
                            a_ * double(t_dk_[gd][std::size_t(k)]);
          double fresh = (b_ + a_ * double(t_d_[gd])) * parent(mi, k);
          row[std::size_t(k)] = (existing + fresh) / denom;
        }
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
  double parent(std::size_t mi, int k) const {
    return (double(T_mk_[mi][std::size_t(k)]) + alpha_) /
           (double(T_m_[mi]) + double(K_) * alpha_);
  }

  std::pair<int, bool> draw(std::size_t mi, std::size_t gd, TokenId w) {
    const bool empty_da = c_d_[gd] == 0;
    double fresh_scale = b_ + a_ * double(t_d_[gd]);
    for (int k = 0; k < K_; ++k) {
      double wordlik = (double(n_kw_[std::size_t(k)][std::size_t(w)]) + cfg_.beta) /
                       (double(n_k_[std::size_t(k)]) + double(V_) * cfg_.beta);
      double mass;
      if (empty_da) {
        // (b + a*t) is constant across k here and b may be <= 0; the new
        // table is forced, so only the parent weight matters
        mass = parent(mi, k);
      } else {
        double existing = double(c_dk_[gd][std::size_t(k)]) -
                          a_ * double(t_dk_[gd][std::size_t(k)]);
        mass = existing + fresh_scale * parent(mi, k);
      }
      scores_[std::size_t(k)] = mass * wordlik;
    }
    int k = int(rng_.categorical(scores_));
    bool open;
    if (empty_da || c_dk_[gd][std::size_t(k)] == 0) {
      open = true;
    } else {
      double existing = double(c_dk_[gd][std::size_t(k)]) -
                        a_ * double(t_dk_[gd][std::size_t(k)]);
      double fresh = fresh_scale * parent(mi, k);
      open = rng_.bernoulli(fresh / (existing + fresh));
    }
    return {k, open};
  }

  void add(std::size_t mi, std::size_t gd, TokenId w, int k, bool open) {
    c_dk_[gd][std::size_t(k)]++;
    c_d_[gd]++;
    if (open || c_dk_[gd][std::size_t(k)] == 1) {
      t_dk_[gd][std::size_t(k)]++;
      t_d_[gd]++;
      T_mk_[mi][std::size_t(k)]++;
      T_m_[mi]++;
    }
    n_kw_[std::size_t(k)][std::size_t(w)]++;
    n_k_[std::size_t(k)]++;
  }

  void remove(std::size_t mi, std::size_t gd, TokenId w, int k) {
    int& c = c_dk_[gd][std::size_t(k)];
    int& t = t_dk_[gd][std::size_t(k)];
    bool close = rng_.bernoulli(double(t) / double(c));
    c--;
    c_d_[gd]--;
    bool drop_table = false;
    if (c == 0)
      drop_table = true;               // t was 1, last customer left
    else if ((close && t > 1) || t > c)
      drop_table = true;
    if (drop_table) {
      t--;
      t_d_[gd]--;
      T_mk_[mi][std::size_t(k)]--;
      T_m_[mi]--;
    }
    n_kw_[std::size_t(k)][std::size_t(w)]--;
    n_k_[std::size_t(k)]--;
  }

  const Corpus& corpus_;
  ModelConfig cfg_;
  int K_;
  std::size_t V_;
  double a_, b_, alpha_;
  Rng rng_;

  std::vector<std::size_t> da_offset_;
  std::vector<std::vector<std::vector<int>>> z_;
  std::vector<std::vector<int>> c_dk_, t_dk_;  // [global da][k]
  std::vector<int> c_d_, t_d_;
  std::vector<std::vector<int>> T_mk_;         // [meeting][k]
  std::vector<int> T_m_;
  std::vector<std::vector<int>> n_kw_;
  std::vector<int> n_k_;
  std::vector<double> scores_;
};

}  // namespace

std::unique_ptr<GibbsSampler> make_stm_sampler(const Corpus& corpus,
                                               const ModelConfig& config) {
  return std::make_unique<StmSampler>(corpus, config);
}

}  // namespace decsum::internal
