#include "decsum/topic_models.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace decsum;

namespace {

ModelConfig quick_config(ModelKind kind, int topics, std::uint64_t seed,
                         int iterations = 30) {
  ModelConfig c;
  c.kind = kind;
  c.num_topics = topics;
  c.iterations = iterations;
  c.burn_in = iterations / 2;
  c.sample_interval = 5;
  c.seed = seed;
  if (kind == ModelKind::kStm) c.alpha = 0.5;
  return c;
}

bool posterior_equal(const TopicModelPosterior& a,
                     const TopicModelPosterior& b) {
  if (a.p_topic_given_da != b.p_topic_given_da) return false;
  return a.p_word_given_topic == b.p_word_given_topic;
}

void check_normalized(const TopicModelPosterior& post) {
  for (const auto& meeting : post.p_topic_given_da)
    for (const auto& row : meeting) {
      double sum = 0.0;
      for (double x : row) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
  for (const auto& row : post.p_word_given_topic) {
    double sum = 0.0;
    for (double x : row) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

// two meetings, well-separated word usage per DA
Corpus synthetic_corpus(std::uint64_t seed, int das_per_meeting = 20,
                        int tokens_per_da = 10) {
  std::mt19937_64 gen(seed);
  std::vector<std::string> topic_a = {"ant", "bee", "cat", "dog", "elk"};
  std::vector<std::string> topic_b = {"oak", "pine", "fern", "moss", "reed"};
  std::vector<std::vector<std::string>> meetings(2);
  for (auto& meeting : meetings)
    for (int d = 0; d < das_per_meeting; ++d) {
      const auto& vocab = (gen() % 2 == 0) ? topic_a : topic_b;
      std::string text;
      for (int t = 0; t < tokens_per_da; ++t) {
        if (t) text += ' ';
        text += vocab[gen() % vocab.size()];
      }
      meeting.push_back(text);
    }
  return test::make_corpus(meetings);
}

}  // namespace

TEST_SUITE("topic_models") {

TEST_CASE("lda_conditional hand example") {
  std::vector<int> n_dk = {1, 0};
  std::vector<int> n_kw = {2, 0};
  std::vector<int> n_k = {3, 0};
  auto scores = lda_conditional(n_dk, n_kw, n_k, 0.1, 0.1, 2);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0] == doctest::Approx(1.1 * 2.1 / 3.2).epsilon(1e-12));
  CHECK(scores[1] == doctest::Approx(0.1 * 0.1 / 0.2).epsilon(1e-12));
  CHECK(scores[0] == doctest::Approx(0.721875));
  CHECK(scores[1] == doctest::Approx(0.05));
}

TEST_CASE("lda_conditional on zero counts is uniform and positive") {
  std::vector<int> zeros = {0, 0, 0};
  auto scores = lda_conditional(zeros, zeros, zeros, 0.1, 0.1, 4);
  for (double s : scores) {
    CHECK(s == doctest::Approx(0.1 * 0.1 / 0.4));
    CHECK(s > 0.0);
  }
}

TEST_CASE("seeded determinism for every model") {
  auto corpus = synthetic_corpus(1);
  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm}) {
    auto config = quick_config(kind, 3, 42);
    auto a = train(corpus, config);
    auto b = train(corpus, config);
    CHECK(posterior_equal(a, b));
    auto c = train(corpus, quick_config(kind, 3, 43));
    CHECK(!posterior_equal(a, c));  // different chains should diverge
  }
}

TEST_CASE("posteriors are normalized for every model") {
  auto corpus = test::load_toy_corpus();
  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm}) {
    auto post = train(corpus, quick_config(kind, 4, 7, 20));
    check_normalized(post);
    CHECK(post.p_word_given_topic.size() == 4);
    CHECK(post.p_topic_given_da.size() == corpus.meetings.size());
  }
}

TEST_CASE("count audits stay clean over sweeps") {
  auto corpus = synthetic_corpus(3, 12, 8);
  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm}) {
    auto sampler = make_sampler(corpus, quick_config(kind, 3, 5));
    for (int i = 0; i < 25; ++i) {
      sampler->sweep();
      CHECK_NOTHROW(sampler->audit());
    }
  }
}

TEST_CASE("K=1 gives the smoothed unigram model") {
  auto corpus = synthetic_corpus(11, 10, 6);
  const std::size_t V = corpus.vocabulary.size();
  const double beta = 0.1;
  std::vector<double> expected(V, 0.0);
  {
    std::vector<long long> counts(V, 0);
    long long total = 0;
    for (const auto& m : corpus.meetings)
      for (const auto& da : m.das)
        for (TokenId w : da.tokens) {
          counts[std::size_t(w)]++;
          total++;
        }
    for (std::size_t w = 0; w < V; ++w)
      expected[w] = (double(counts[w]) + beta) / (double(total) + double(V) * beta);
  }

  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm}) {
    auto config = quick_config(kind, 1, 17, 10);
    if (kind == ModelKind::kMgLda) config.mg_alpha_mix_gl = 0.0;
    auto post = train(corpus, config);
    for (const auto& meeting : post.p_topic_given_da)
      for (const auto& row : meeting) {
        REQUIRE(row.size() == 1);
        CHECK(row[0] == doctest::Approx(1.0).epsilon(1e-12));
      }
    REQUIRE(post.p_word_given_topic.size() == 1);
    for (std::size_t w = 0; w < V; ++w)
      CHECK(post.p_word_given_topic[0][w] ==
            doctest::Approx(expected[w]).epsilon(1e-9));
  }
}

TEST_CASE("MG-LDA with one-DA windows and no global mass collapses to LocalLDA") {
  auto corpus = synthetic_corpus(23, 10, 6);
  ModelConfig local = quick_config(ModelKind::kLocalLda, 3, 77);
  ModelConfig mg = quick_config(ModelKind::kMgLda, 3, 77);
  mg.mg_window = 1;
  mg.mg_alpha_mix_gl = 0.0;      // zero prior mass on the global route
  mg.mg_alpha_loc = local.alpha; // match the document-topic prior
  auto a = train(corpus, local);
  auto b = train(corpus, mg);
  CHECK(posterior_equal(a, b));
}

TEST_CASE("STM with a=0 and large b behaves like meeting-document LDA") {
  auto corpus = synthetic_corpus(29, 16, 8);
  ModelConfig lda = quick_config(ModelKind::kLda, 2, 31, 60);
  ModelConfig stm = quick_config(ModelKind::kStm, 2, 31, 60);
  stm.stm_a = 0.0;
  stm.stm_b = 1e6;
  auto lda_post = train(corpus, lda);
  auto stm_post = train(corpus, stm);

  // greedy topic matching by word-distribution overlap
  auto overlap = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::min(p[i], q[i]);
    return s;
  };
  int map0 = overlap(stm_post.p_word_given_topic[0], lda_post.p_word_given_topic[0]) >=
                     overlap(stm_post.p_word_given_topic[0], lda_post.p_word_given_topic[1])
                 ? 0
                 : 1;
  std::vector<int> topic_map = {map0, 1 - map0};

  std::size_t agree = 0, total = 0;
  for (std::size_t mi = 0; mi < corpus.meetings.size(); ++mi)
    for (std::size_t di = 0; di < corpus.meetings[mi].das.size(); ++di) {
      const auto& srow = stm_post.p_topic_given_da[mi][di];
      const auto& lrow = lda_post.p_topic_given_da[mi][di];
      int s_arg = srow[0] >= srow[1] ? 0 : 1;
      int l_arg = lrow[0] >= lrow[1] ? 0 : 1;
      if (topic_map[std::size_t(s_arg)] == l_arg) agree++;
      total++;
    }
  CHECK(double(agree) / double(total) >= 0.9);
}

TEST_CASE("synthetic topic recovery for LocalLDA") {
  auto corpus = synthetic_corpus(41, 25, 10);
  auto config = quick_config(ModelKind::kLocalLda, 2, 9, 80);
  auto post = train(corpus, config);

  // every DA uses one of two disjoint five-word vocabularies
  for (std::size_t mi = 0; mi < corpus.meetings.size(); ++mi)
    for (std::size_t di = 0; di < corpus.meetings[mi].das.size(); ++di) {
      const auto& row = post.p_topic_given_da[mi][di];
      CHECK(std::max(row[0], row[1]) > 0.7);
    }
}

TEST_CASE("posterior save and load round trip exactly") {
  auto corpus = synthetic_corpus(53, 6, 5);
  auto post = train(corpus, quick_config(ModelKind::kStm, 2, 3, 10));
  test::TempDir dir("posterior");
  auto path = (dir.path() / "p.json").string();
  save_posterior(post, path);
  auto back = load_posterior(path);
  CHECK(posterior_equal(post, back));
  CHECK(back.vocab_fingerprint == post.vocab_fingerprint);
  CHECK(back.config.num_topics == post.config.num_topics);
  CHECK(to_string(back.config.kind) == to_string(post.config.kind));
}

TEST_CASE("config validation") {
  ModelConfig bad;
  bad.num_topics = 0;
  auto errs = validate_model_config(bad);
  REQUIRE(!errs.empty());
  CHECK(errs.front() == "num_topics must be >= 1");

  ModelConfig burn;
  burn.burn_in = burn.iterations;
  CHECK(!validate_model_config(burn).empty());

  auto corpus = test::make_corpus({{""}});  // no tokens at all
  CHECK_THROWS_AS(train(corpus, quick_config(ModelKind::kLda, 2, 1)),
                  std::invalid_argument);
}

TEST_CASE("LocalLDA estimate matches the smoothed count formula") {
  // single DA of two identical tokens: assignments can only split 2-0, 1-1
  // or 0-2, so the averaged row must be a mean of rows from that set
  auto corpus = test::make_corpus({{"echo echo"}});
  ModelConfig config = quick_config(ModelKind::kLocalLda, 2, 5, 1);
  config.burn_in = 0;
  config.sample_interval = 1;
  auto post = train(corpus, config);
  const auto& row = post.p_topic_given_da[0][0];
  double hi = std::max(row[0], row[1]);
  double expected_concentrated = 2.1 / 2.2;
  double expected_split = 1.1 / 2.2;
  bool matches = std::abs(hi - expected_concentrated) < 1e-12 ||
                 std::abs(hi - expected_split) < 1e-12;
  CHECK(matches);
  CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model kind strings round trip") {
  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm})
    CHECK(model_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(model_kind_from_string("nope"), std::invalid_argument);
}

}  // TEST_SUITE
