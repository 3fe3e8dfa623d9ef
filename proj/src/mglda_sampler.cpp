#include "decsum/rng.hpp"
#include "sampler_internal.hpp"

// Multi-grain LDA: meetings carry one global topic mixture; sliding windows
// of mg_window consecutive DAs carry local topic mixtures. Each token picks
// a window v covering its DA, a granularity r (global/local) and a topic z,
// sampled jointly from the collapsed conditional.
//
// Window v starts at DA v and spans mg_window DAs; DA i is covered by
// windows i-T+1 .. i, clipped at the meeting boundaries.

namespace decsum::internal {
namespace {

constexpr int kGlobal = 0;
constexpr int kLocal = 1;

class MgLdaSampler final : public GibbsSampler {
 public:
  MgLdaSampler(const Corpus& corpus, const ModelConfig& config)
      : corpus_(corpus),
        cfg_(config),
        K_(config.num_topics),
        V_(corpus.vocabulary.size()),
        T_(config.mg_window),
        mix_gl_(config.mix_prior_gl()),
        mix_loc_(config.mix_prior_loc()),
        rng_(config.seed) {
    const std::size_t M = corpus.meetings.size();
    z_.resize(M);
    v_.resize(M);
    r_.resize(M);
    n_dv_.resize(M);
    n_v_gl_.resize(M);
    n_v_loc_.resize(M);
    n_loc_vk_.resize(M);
    n_loc_v_.resize(M);
    n_gl_mk_.assign(M, std::vector<int>(std::size_t(K_), 0));
    n_gl_m_.assign(M, 0);
    n_gl_kw_.assign(std::size_t(K_), std::vector<int>(V_, 0));
    n_gl_k_.assign(std::size_t(K_), 0);
    n_loc_kw_.assign(std::size_t(K_), std::vector<int>(V_, 0));
    n_loc_k_.assign(std::size_t(K_), 0);
    scores_.resize(std::size_t(T_) * 2 * std::size_t(K_));

    for (std::size_t mi = 0; mi < M; ++mi) {
      const auto& das = corpus.meetings[mi].das;
      const std::size_t S = das.size();
      z_[mi].resize(S);
      v_[mi].resize(S);
      r_[mi].resize(S);
      n_dv_[mi].resize(S);
      n_v_gl_[mi].assign(S, 0);
      n_v_loc_[mi].assign(S, 0);
      n_loc_vk_[mi].assign(S * std::size_t(K_), 0);
      n_loc_v_[mi].assign(S, 0);
      for (std::size_t di = 0; di < S; ++di) {
        n_dv_[mi][di].assign(std::size_t(num_cands(int(di))), 0);
        z_[mi][di].resize(das[di].tokens.size());
        v_[mi][di].resize(das[di].tokens.size());
        r_[mi][di].resize(das[di].tokens.size());
      }
    }

    for (std::size_t mi = 0; mi < M; ++mi) {
      const auto& das = corpus.meetings[mi].das;
      for (std::size_t di = 0; di < das.size(); ++di)
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          auto [vv, rr, kk] = draw(int(mi), int(di), das[di].tokens[ti]);
          v_[mi][di][ti] = vv;
          r_[mi][di][ti] = rr;
          z_[mi][di][ti] = kk;
          increment(int(mi), int(di), das[di].tokens[ti], vv, rr, kk);
        }
    }
  }

  void sweep() override {
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      for (std::size_t di = 0; di < das.size(); ++di)
        for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
          TokenId w = das[di].tokens[ti];
          decrement(int(mi), int(di), w, v_[mi][di][ti], r_[mi][di][ti],
                    z_[mi][di][ti]);
          auto [vv, rr, kk] = draw(int(mi), int(di), w);
          v_[mi][di][ti] = vv;
          r_[mi][di][ti] = rr;
          z_[mi][di][ti] = kk;
          increment(int(mi), int(di), w, vv, rr, kk);
        }
    }
  }

  void audit() const override;

  TopicModelPosterior estimate() const override {
    TopicModelPosterior post;
    post.config = cfg_;
    post.vocab_fingerprint = corpus_.vocabulary_fingerprint();
    post.p_topic_given_da.resize(corpus_.meetings.size());
    for (std::size_t mi = 0; mi < corpus_.meetings.size(); ++mi) {
      const auto& das = corpus_.meetings[mi].das;
      post.p_topic_given_da[mi].resize(das.size());
      for (std::size_t di = 0; di < das.size(); ++di) {
        const int lo = cand_lo(int(di));
        const int nc = num_cands(int(di));
        long long da_tokens = 0;
        for (int c = 0; c < nc; ++c) da_tokens += n_dv_[mi][di][std::size_t(c)];
        double psi_denom = double(da_tokens) + double(nc) * cfg_.mg_gamma;

        std::vector<double> row(std::size_t(K_), 0.0);
        for (int c = 0; c < nc; ++c) {
          const std::size_t v = std::size_t(lo + c);
          double psi =
              (double(n_dv_[mi][di][std::size_t(c)]) + cfg_.mg_gamma) / psi_denom;
          double theta_denom =
              double(n_loc_v_[mi][v]) + double(K_) * cfg_.mg_alpha_loc;
          for (int k = 0; k < K_; ++k)
            row[std::size_t(k)] +=
                psi *
                (double(n_loc_vk_[mi][v * std::size_t(K_) + std::size_t(k)]) +
                 cfg_.mg_alpha_loc) /
                theta_denom;
        }
        post.p_topic_given_da[mi][di] = std::move(row);
      }
    }
    // only the local topics feed summarization
    post.p_word_given_topic.assign(std::size_t(K_), std::vector<double>(V_));
    for (int k = 0; k < K_; ++k) {
      double denom = double(n_loc_k_[std::size_t(k)]) + double(V_) * cfg_.beta;
      for (std::size_t w = 0; w < V_; ++w)
        post.p_word_given_topic[std::size_t(k)][w] =
            (double(n_loc_kw_[std::size_t(k)][w]) + cfg_.beta) / denom;
    }
    return post;
  }

 private:
  int cand_lo(int di) const { return std::max(0, di - T_ + 1); }
  int num_cands(int di) const { return di - cand_lo(di) + 1; }

  struct Pick {
    int v;
    int r;
    int k;
  };

  Pick draw(int mi, int di, TokenId w) {
    const int lo = cand_lo(di);
    const int nc = num_cands(di);
    const auto& dv = n_dv_[std::size_t(mi)][std::size_t(di)];
    std::size_t idx = 0;
    double gl_theta_denom =
        double(n_gl_m_[std::size_t(mi)]) + double(K_) * cfg_.mg_alpha_gl;
    for (int c = 0; c < nc; ++c) {
      const std::size_t v = std::size_t(lo + c);
      double pv = double(dv[std::size_t(c)]) + cfg_.mg_gamma;
      double mix_denom = double(n_v_gl_[std::size_t(mi)][v]) +
                         double(n_v_loc_[std::size_t(mi)][v]) + mix_gl_ + mix_loc_;
      double p_gl = pv * (double(n_v_gl_[std::size_t(mi)][v]) + mix_gl_) / mix_denom;
      double p_loc =
          pv * (double(n_v_loc_[std::size_t(mi)][v]) + mix_loc_) / mix_denom;
      for (int k = 0; k < K_; ++k)
        scores_[idx++] =
            p_gl *
            (double(n_gl_mk_[std::size_t(mi)][std::size_t(k)]) + cfg_.mg_alpha_gl) /
            gl_theta_denom *
            (double(n_gl_kw_[std::size_t(k)][std::size_t(w)]) + cfg_.beta) /
            (double(n_gl_k_[std::size_t(k)]) + double(V_) * cfg_.beta);
      double loc_theta_denom =
          double(n_loc_v_[std::size_t(mi)][v]) + double(K_) * cfg_.mg_alpha_loc;
      for (int k = 0; k < K_; ++k)
        scores_[idx++] =
            p_loc *
            (double(n_loc_vk_[std::size_t(mi)][v * std::size_t(K_) + std::size_t(k)]) +
             cfg_.mg_alpha_loc) /
            loc_theta_denom *
            (double(n_loc_kw_[std::size_t(k)][std::size_t(w)]) + cfg_.beta) /
            (double(n_loc_k_[std::size_t(k)]) + double(V_) * cfg_.beta);
    }
    std::size_t pick =
        rng_.categorical(std::span<const double>(scores_.data(), idx));
    int c = int(pick) / (2 * K_);
    int rem = int(pick) % (2 * K_);
    return Pick{lo + c, rem / K_, rem % K_};
  }

  void increment(int mi, int di, TokenId w, int v, int r, int k) { touch(mi, di, w, v, r, k, +1); }
  void decrement(int mi, int di, TokenId w, int v, int r, int k) { touch(mi, di, w, v, r, k, -1); }

  void touch(int mi, int di, TokenId w, int v, int r, int k, int delta) {
    const std::size_t m = std::size_t(mi);
    n_dv_[m][std::size_t(di)][std::size_t(v - cand_lo(di))] += delta;
    if (r == kGlobal) {
      n_v_gl_[m][std::size_t(v)] += delta;
      n_gl_mk_[m][std::size_t(k)] += delta;
      n_gl_m_[m] += delta;
      n_gl_kw_[std::size_t(k)][std::size_t(w)] += delta;
      n_gl_k_[std::size_t(k)] += delta;
    } else {
      n_v_loc_[m][std::size_t(v)] += delta;
      n_loc_vk_[m][std::size_t(v) * std::size_t(K_) + std::size_t(k)] += delta;
      n_loc_v_[m][std::size_t(v)] += delta;
      n_loc_kw_[std::size_t(k)][std::size_t(w)] += delta;
      n_loc_k_[std::size_t(k)] += delta;
    }
  }

  const Corpus& corpus_;
  ModelConfig cfg_;
  int K_;
  std::size_t V_;
  int T_;
  double mix_gl_;
  double mix_loc_;
  Rng rng_;

  std::vector<std::vector<std::vector<int>>> z_, v_, r_;
  std::vector<std::vector<std::vector<int>>> n_dv_;    // [m][da][cand]
  std::vector<std::vector<int>> n_v_gl_, n_v_loc_;     // [m][window]
  std::vector<std::vector<int>> n_loc_vk_;             // [m][window*K + k]
  std::vector<std::vector<int>> n_loc_v_;              // [m][window]
  std::vector<std::vector<int>> n_gl_mk_;              // [m][k]
  std::vector<int> n_gl_m_;
  std::vector<std::vector<int>> n_gl_kw_, n_loc_kw_;   // [k][w]
  std::vector<int> n_gl_k_, n_loc_k_;
  std::vector<double> scores_;
};

void MgLdaSampler::audit() const {
  const std::size_t M = corpus_.meetings.size();
  std::vector<std::vector<int>> gl_kw(std::size_t(K_), std::vector<int>(V_, 0));
  std::vector<std::vector<int>> loc_kw(std::size_t(K_), std::vector<int>(V_, 0));
  std::vector<long long> gl_k(std::size_t(K_), 0), loc_k(std::size_t(K_), 0);
  long long total = 0;

  for (std::size_t mi = 0; mi < M; ++mi) {
    const auto& das = corpus_.meetings[mi].das;
    const std::size_t S = das.size();
    std::vector<std::vector<int>> dv(S);
    for (std::size_t di = 0; di < S; ++di)
      dv[di].assign(std::size_t(num_cands(int(di))), 0);
    std::vector<int> v_gl(S, 0), v_loc(S, 0), loc_v(S, 0);
    std::vector<int> loc_vk(S * std::size_t(K_), 0);
    std::vector<int> gl_mk(std::size_t(K_), 0);
    long long gl_m = 0;

    for (std::size_t di = 0; di < S; ++di) {
      long long da_window_total = 0;
      for (std::size_t ti = 0; ti < das[di].tokens.size(); ++ti) {
        int v = v_[mi][di][ti];
        int r = r_[mi][di][ti];
        int k = z_[mi][di][ti];
        TokenId w = das[di].tokens[ti];
        audit_true(k >= 0 && k < K_, "topic in range");
        audit_true(v >= cand_lo(int(di)) && v <= int(di),
                   "window covers its DA");
        dv[di][std::size_t(v - cand_lo(int(di)))]++;
        da_window_total++;
        if (r == kGlobal) {
          v_gl[std::size_t(v)]++;
          gl_mk[std::size_t(k)]++;
          gl_m++;
          gl_kw[std::size_t(k)][std::size_t(w)]++;
          gl_k[std::size_t(k)]++;
        } else {
          v_loc[std::size_t(v)]++;
          loc_vk[std::size_t(v) * std::size_t(K_) + std::size_t(k)]++;
          loc_v[std::size_t(v)]++;
          loc_kw[std::size_t(k)][std::size_t(w)]++;
          loc_k[std::size_t(k)]++;
        }
        total++;
      }
      audit_eq(da_window_total, (long long)das[di].tokens.size(),
               "window counts cover DA tokens");
    }

    for (std::size_t di = 0; di < S; ++di)
      for (std::size_t c = 0; c < dv[di].size(); ++c)
        audit_eq(n_dv_[mi][di][c], dv[di][c], "DA-window count");
    for (std::size_t v = 0; v < S; ++v) {
      audit_eq(n_v_gl_[mi][v], v_gl[v], "window global count");
      audit_eq(n_v_loc_[mi][v], v_loc[v], "window local count");
      audit_eq(n_loc_v_[mi][v], loc_v[v], "window local total");
      long long row = 0;
      for (int k = 0; k < K_; ++k) {
        audit_eq(n_loc_vk_[mi][v * std::size_t(K_) + std::size_t(k)],
                 loc_vk[v * std::size_t(K_) + std::size_t(k)],
                 "window-topic count");
        row += loc_vk[v * std::size_t(K_) + std::size_t(k)];
      }
      audit_eq(row, (long long)loc_v[v], "window-topic marginal");
    }
    for (int k = 0; k < K_; ++k)
      audit_eq(n_gl_mk_[mi][std::size_t(k)], gl_mk[std::size_t(k)],
               "meeting global-topic count");
    audit_eq(n_gl_m_[mi], gl_m, "meeting global total");
  }

  for (int k = 0; k < K_; ++k) {
    audit_eq(n_gl_k_[std::size_t(k)], gl_k[std::size_t(k)], "global topic total");
    audit_eq(n_loc_k_[std::size_t(k)], loc_k[std::size_t(k)], "local topic total");
    long long grow = 0, lrow = 0;
    for (std::size_t w = 0; w < V_; ++w) {
      audit_eq(n_gl_kw_[std::size_t(k)][w], gl_kw[std::size_t(k)][w],
               "global topic-word count");
      audit_eq(n_loc_kw_[std::size_t(k)][w], loc_kw[std::size_t(k)][w],
               "local topic-word count");
      grow += gl_kw[std::size_t(k)][w];
      lrow += loc_kw[std::size_t(k)][w];
    }
    audit_eq(grow, gl_k[std::size_t(k)], "global topic-word marginal");
    audit_eq(lrow, loc_k[std::size_t(k)], "local topic-word marginal");
  }
  audit_eq(total, (long long)corpus_.total_tokens(), "corpus token total");
}

}  // namespace

std::unique_ptr<GibbsSampler> make_mglda_sampler(const Corpus& corpus,
                                                 const ModelConfig& config) {
  return std::make_unique<MgLdaSampler>(corpus, config);
}

}  // namespace decsum::internal
