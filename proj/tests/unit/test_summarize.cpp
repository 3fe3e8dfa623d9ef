#include "decsum/summarize.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "decsum/rouge.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace decsum;

namespace {

// posterior with explicit rows; p_word indexed [topic][token id]
TopicModelPosterior make_posterior(
    const Corpus& corpus,
    const std::vector<std::vector<std::vector<double>>>& topic_rows,
    const std::vector<std::vector<double>>& word_rows) {
  TopicModelPosterior post;
  post.config.num_topics = int(word_rows.size());
  post.p_topic_given_da = topic_rows;
  post.p_word_given_topic = word_rows;
  post.vocab_fingerprint = corpus.vocabulary_fingerprint();
  return post;
}

DecisionCluster single_cluster(std::vector<DaRef> centers,
                               const std::string& id = "d1") {
  DecisionCluster c;
  c.decision_id = id;
  c.center_das = std::move(centers);
  return c;
}

}  // namespace

TEST_SUITE("summarize") {

TEST_CASE("domsum follows the dominant-topic trace") {
  auto corpus = test::make_corpus({{"alpha beta"}});
  TokenId a = *corpus.vocabulary.id_of("alpha");
  TokenId b = *corpus.vocabulary.id_of("beta");
  REQUIRE(a == 0);
  REQUIRE(b == 1);
  // P(T|DA) = [0.7, 0.3]; P(a|T) = [0.5, 0.1]; P(b|T) = [0.1, 0.9]
  auto post = make_posterior(corpus, {{{0.7, 0.3}}},
                             {{0.5, 0.1}, {0.1, 0.9}});
  auto cluster = single_cluster({DaRef{0, 0}});
  auto summary = domsum(cluster, corpus, post);
  CHECK(summary.tokens == std::vector<std::string>{"alpha"});
  REQUIRE(summary.provenance.size() == 1);
  CHECK(summary.provenance[0].topic == 0);
  CHECK(summary.provenance[0].source == DaRef{0, 0});
}

TEST_CASE("domsum with K=1 keeps every content word") {
  auto corpus = test::make_corpus({{"alpha beta gamma"}});
  auto post = make_posterior(corpus, {{{1.0}}},
                             {{0.4, 0.3, 0.3}});
  auto summary = domsum(single_cluster({DaRef{0, 0}}), corpus, post);
  CHECK(summary.tokens ==
        std::vector<std::string>{"alpha", "beta", "gamma"});
}

TEST_CASE("domsum union semantics and duplicate-DA invariance") {
  auto corpus = test::make_corpus({{"latex case", "latex button"}});
  auto post = make_posterior(
      corpus, {{{1.0}, {1.0}}},
      {{0.25, 0.25, 0.25, 0.25}});
  auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});
  auto summary = domsum(cluster, corpus, post);
  CHECK(summary.tokens ==
        std::vector<std::string>{"latex", "case", "button"});

  auto duplicated = cluster;
  duplicated.center_das.push_back(DaRef{0, 0});
  CHECK(domsum(duplicated, corpus, post).tokens == summary.tokens);
}

TEST_CASE("domsum excludes stopwords and subsets cluster vocabulary") {
  auto corpus = test::make_corpus({{"the latex case"}});
  corpus.stopword_ids.insert(*corpus.vocabulary.id_of("the"));
  auto post = make_posterior(corpus, {{{1.0}}}, {{0.3, 0.3, 0.4}});
  auto summary = domsum(single_cluster({DaRef{0, 0}}), corpus, post);
  CHECK(summary.tokens == std::vector<std::string>{"latex", "case"});
}

TEST_CASE("domsum errors on a DA missing from the posterior") {
  auto corpus = test::make_corpus({{"alpha", "beta"}});
  auto post = make_posterior(corpus, {{{1.0}}}, {{0.5, 0.5}});  // row 1 missing
  auto cluster = single_cluster({DaRef{0, 1}});
  CHECK_THROWS_WITH_AS(domsum(cluster, corpus, post),
                       doctest::Contains("M0:1"), std::runtime_error);
}

TEST_CASE("attach_context adjacent clips at boundaries") {
  std::vector<std::string> texts(9, "word");
  auto corpus = test::make_corpus({texts});
  auto cluster = single_cluster({DaRef{0, 2}});
  auto extended = attach_context(cluster, corpus, ContextKind::kAdjacent,
                                 WordMode::kOne);
  std::set<int> positions;
  for (const auto& [ctx, center] : extended.context_das) {
    CHECK(center == DaRef{0, 2});
    positions.insert(ctx.da);
  }
  CHECK(positions == std::set<int>{0, 1, 3, 4, 5, 6, 7});
}

TEST_CASE("attach_context skips existing centers") {
  std::vector<std::string> texts(6, "word");
  auto corpus = test::make_corpus({texts});
  auto cluster = single_cluster({DaRef{0, 1}, DaRef{0, 2}});
  auto extended = attach_context(cluster, corpus, ContextKind::kAdjacent,
                                 WordMode::kOne, ContextOptions{1, 1, 10});
  for (const auto& [ctx, center] : extended.context_das) {
    CHECK(ctx != DaRef{0, 1});
    CHECK(ctx != DaRef{0, 2});
  }
}

TEST_CASE("attach_context tfidf tie-break picks lowest indices") {
  // all DAs share one word, so every idf is zero and all similarities zero
  std::vector<std::string> texts(14, "same");
  auto corpus = test::make_corpus({texts});
  auto cluster = single_cluster({DaRef{0, 12}});
  auto extended = attach_context(cluster, corpus, ContextKind::kTfIdf,
                                 WordMode::kMulti);
  REQUIRE(extended.context_das.size() == 10);
  std::vector<int> got;
  for (const auto& [ctx, center] : extended.context_das) got.push_back(ctx.da);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(extended.word_mode == WordMode::kMulti);
}

TEST_CASE("context word modes pick different dominant topics") {
  // center DA dominated by topic 0, context DA by topic 1; the context word
  // "cost" belongs to topic 1
  auto corpus = test::make_corpus({{"alpha", "cost"}});
  auto post = make_posterior(corpus,
                             {{{0.9, 0.1}, {0.1, 0.9}}},
                             {{0.9, 0.1}, {0.1, 0.9}});
  auto cluster = single_cluster({DaRef{0, 0}});

  auto one = attach_context(cluster, corpus, ContextKind::kAdjacent,
                            WordMode::kOne, ContextOptions{1, 1, 10});
  auto multi = attach_context(cluster, corpus, ContextKind::kAdjacent,
                              WordMode::kMulti, ContextOptions{1, 1, 10});
  // under "one" the context word must match the CENTER's dominant topic, so
  // "cost" (sampled topic 1) is dropped; under "multi" it is kept
  CHECK(domsum(one, corpus, post).tokens == std::vector<std::string>{"alpha"});
  CHECK(domsum(multi, corpus, post).tokens ==
        std::vector<std::string>{"alpha", "cost"});
}

TEST_CASE("p_topic_given_cluster weighting") {
  auto corpus = test::make_corpus({{"a b c", "d"}});
  auto post = make_posterior(corpus,
                             {{{1.0, 0.0}, {0.0, 1.0}}},
                             {{0.25, 0.25, 0.25, 0.25},
                              {0.25, 0.25, 0.25, 0.25}});
  auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});
  auto pc = p_topic_given_cluster(cluster, corpus, post);
  CHECK(pc[0] == doctest::Approx(0.75));
  CHECK(pc[1] == doctest::Approx(0.25));

  auto only = p_topic_given_cluster(single_cluster({DaRef{0, 1}}), corpus, post);
  CHECK(only[0] == doctest::Approx(0.0));
  CHECK(only[1] == doctest::Approx(1.0));

  DecisionCluster empty;
  CHECK_THROWS_AS(p_topic_given_cluster(empty, corpus, post),
                  std::invalid_argument);
}

TEST_CASE("p_topic_given_cluster equal lengths symmetric") {
  auto corpus = test::make_corpus({{"a b", "c d"}});
  auto post = make_posterior(corpus,
                             {{{1.0, 0.0}, {0.0, 1.0}}},
                             {{0.25, 0.25, 0.25, 0.25},
                              {0.25, 0.25, 0.25, 0.25}});
  auto pc = p_topic_given_cluster(single_cluster({DaRef{0, 0}, DaRef{0, 1}}),
                                  corpus, post);
  CHECK(pc[0] == doctest::Approx(0.5));
  CHECK(pc[1] == doctest::Approx(0.5));
}

TEST_CASE("score_onetopic basics and arithmetic oracle") {
  SUBCASE("single DA scores 1") {
    auto corpus = test::make_corpus({{"alpha beta"}});
    auto post = make_posterior(corpus, {{{0.7, 0.3}}},
                               {{0.5, 0.1}, {0.1, 0.9}});
    auto scores = score_onetopic(single_cluster({DaRef{0, 0}}), corpus, post);
    REQUIRE(scores.size() == 1);
    CHECK(scores[0] == doctest::Approx(1.0));
  }

  SUBCASE("two identical DAs split evenly") {
    auto corpus = test::make_corpus({{"alpha beta", "alpha beta"}});
    auto post = make_posterior(corpus,
                               {{{0.7, 0.3}, {0.7, 0.3}}},
                               {{0.5, 0.1}, {0.1, 0.9}});
    auto scores =
        score_onetopic(single_cluster({DaRef{0, 0}, DaRef{0, 1}}), corpus, post);
    CHECK(scores[0] == doctest::Approx(0.5));
    CHECK(scores[1] == doctest::Approx(0.5));
  }

  SUBCASE("hand-evaluated two-DA instance") {
    auto corpus = test::make_corpus({{"alpha beta", "beta"}});
    auto post = make_posterior(corpus,
                               {{{0.7, 0.3}, {0.2, 0.8}}},
                               {{0.5, 0.1}, {0.1, 0.9}});
    auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});

    // P(T) = (2*[0.7,0.3] + 1*[0.2,0.8]) / 3 = [1.6/3, 1.4/3] -> T* = 0
    auto pc = p_topic_given_cluster(cluster, corpus, post);
    CHECK(pc[0] == doctest::Approx(1.6 / 3.0));

    double p_a1 = 0.35 / 0.38;  // P(T0 | DA1, alpha)
    double p_b1 = 0.07 / 0.34;  // P(T0 | DA1, beta)
    double p_b2 = 0.02 / 0.74;  // P(T0 | DA2, beta)
    double denom = p_a1 + p_b1 + p_b2;
    auto scores = score_onetopic(cluster, corpus, post);
    CHECK(scores[0] == doctest::Approx((p_a1 + p_b1) / denom).epsilon(1e-12));
    CHECK(scores[1] == doctest::Approx(p_b2 / denom).epsilon(1e-12));
    CHECK(scores[0] + scores[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("score_onetopic argmax invariant under uniform word-column scaling") {
  auto corpus = test::make_corpus({{"alpha beta", "beta gamma", "gamma alpha"}});
  auto post = make_posterior(
      corpus,
      {{{0.6, 0.4}, {0.3, 0.7}, {0.5, 0.5}}},
      {{0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}});
  auto cluster =
      single_cluster({DaRef{0, 0}, DaRef{0, 1}, DaRef{0, 2}});
  auto base = score_onetopic(cluster, corpus, post);

  auto scaled = post;
  for (auto& row : scaled.p_word_given_topic)
    for (auto& x : row) x *= 7.5;
  auto rescored = score_onetopic(cluster, corpus, scaled);
  CHECK(std::distance(base.begin(), std::max_element(base.begin(), base.end())) ==
        std::distance(rescored.begin(),
                      std::max_element(rescored.begin(), rescored.end())));
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(base[i] == doctest::Approx(rescored[i]).epsilon(1e-9));
}

TEST_CASE("score_multitopic") {
  SUBCASE("K=1 collapses to onetopic") {
    auto corpus = test::make_corpus({{"alpha beta", "beta"}});
    auto post = make_posterior(corpus, {{{1.0}, {1.0}}}, {{0.6, 0.4}});
    auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});
    auto one = score_onetopic(cluster, corpus, post);
    auto multi = score_multitopic(cluster, corpus, post);
    REQUIRE(one.size() == multi.size());
    for (std::size_t i = 0; i < one.size(); ++i)
      CHECK(one[i] == doctest::Approx(multi[i]).epsilon(1e-12));
  }

  SUBCASE("two identical DAs split evenly") {
    auto corpus = test::make_corpus({{"alpha beta", "alpha beta"}});
    auto post = make_posterior(corpus,
                               {{{0.7, 0.3}, {0.7, 0.3}}},
                               {{0.5, 0.1}, {0.1, 0.9}});
    auto scores = score_multitopic(single_cluster({DaRef{0, 0}, DaRef{0, 1}}),
                                   corpus, post);
    CHECK(scores[0] == doctest::Approx(0.5));
    CHECK(scores[1] == doctest::Approx(0.5));
  }

  SUBCASE("hand-evaluated two-topic instance") {
    auto corpus = test::make_corpus({{"alpha beta", "beta"}});
    auto post = make_posterior(corpus,
                               {{{0.7, 0.3}, {0.2, 0.8}}},
                               {{0.5, 0.1}, {0.1, 0.9}});
    auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});

    double p0_a1 = 0.35 / 0.38, p0_b1 = 0.07 / 0.34, p0_b2 = 0.02 / 0.74;
    double p1_a1 = 0.03 / 0.38, p1_b1 = 0.27 / 0.34, p1_b2 = 0.72 / 0.74;
    double pt0 = 1.6 / 3.0, pt1 = 1.4 / 3.0;
    double denom0 = p0_a1 + p0_b1 + p0_b2;
    double denom1 = p1_a1 + p1_b1 + p1_b2;
    double expect0 = pt0 * (p0_a1 + p0_b1) / denom0 + pt1 * (p1_a1 + p1_b1) / denom1;
    double expect1 = pt0 * p0_b2 / denom0 + pt1 * p1_b2 / denom1;
    double total = expect0 + expect1;

    auto scores = score_multitopic(cluster, corpus, post);
    CHECK(scores[0] == doctest::Approx(expect0 / total).epsilon(1e-12));
    CHECK(scores[1] == doctest::Approx(expect1 / total).epsilon(1e-12));
  }
}

TEST_CASE("score_tmm") {
  auto corpus = test::make_corpus({{"alpha beta"}});
  auto post = make_posterior(corpus, {{{0.7, 0.3}}},
                             {{0.5, 0.1}, {0.1, 0.9}});
  auto cluster = single_cluster({DaRef{0, 0}});

  SUBCASE("hand trace") {
    auto scores = score_tmm(cluster, corpus, post);
    REQUIRE(scores.size() == 1);
    CHECK(scores[0] == doctest::Approx(std::log(0.38 * 0.34)).epsilon(1e-12));
    CHECK(scores[0] == doctest::Approx(-2.0465).epsilon(2e-4));
  }

  SUBCASE("one-hot topic row collapses the mixture") {
    auto hot = make_posterior(corpus, {{{1.0, 0.0}}},
                              {{0.5, 0.1}, {0.1, 0.9}});
    auto scores = score_tmm(cluster, corpus, hot);
    CHECK(scores[0] == doctest::Approx(std::log(0.5 * 0.1)).epsilon(1e-12));
  }

  SUBCASE("duplicated cluster tokens double the log score") {
    auto doubled_corpus = test::make_corpus({{"alpha beta alpha beta"}});
    auto doubled_post = make_posterior(doubled_corpus, {{{0.7, 0.3}}},
                                       {{0.5, 0.1}, {0.1, 0.9}});
    auto one = score_tmm(cluster, corpus, post)[0];
    auto two = score_tmm(single_cluster({DaRef{0, 0}}), doubled_corpus,
                         doubled_post)[0];
    CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-9));
  }
}

TEST_CASE("klsum_select") {
  SUBCASE("single DA within budget") {
    auto corpus = test::make_corpus({{"a b c"}});
    auto post = make_posterior(corpus, {{{0.5, 0.5}}},
                               {{1.0 / 3, 1.0 / 3, 1.0 / 3},
                                {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    auto picks =
        klsum_select(single_cluster({DaRef{0, 0}}), corpus, post, 40);
    CHECK(picks == std::vector<DaRef>{DaRef{0, 0}});
  }

  SUBCASE("exact match beats mismatch") {
    auto corpus = test::make_corpus({{"a a a", "b"}});
    // cluster distribution is dominated by DA0's [1,0]
    auto post = make_posterior(corpus,
                               {{{1.0, 0.0}, {0.0, 1.0}}},
                               {{0.5, 0.5}, {0.5, 0.5}});
    auto picks = klsum_select(single_cluster({DaRef{0, 0}, DaRef{0, 1}}),
                              corpus, post, 3);
    REQUIRE(!picks.empty());
    CHECK(picks.front() == DaRef{0, 0});
  }

  SUBCASE("greedy matches exhaustive on a friendly instance") {
    auto corpus = test::make_corpus({{"a b", "c d", "e f g h i"}});
    auto post = make_posterior(
        corpus,
        {{{0.9, 0.1}, {0.1, 0.9}, {0.5, 0.5}}},
        {std::vector<double>(9, 1.0 / 9), std::vector<double>(9, 1.0 / 9)});
    auto cluster =
        single_cluster({DaRef{0, 0}, DaRef{0, 1}, DaRef{0, 2}});
    auto picks = klsum_select(cluster, corpus, post, 4);
    std::set<DaRef> chosen(picks.begin(), picks.end());
    CHECK(chosen == std::set<DaRef>{DaRef{0, 0}, DaRef{0, 1}});
  }

  SUBCASE("nothing fits the budget") {
    auto corpus = test::make_corpus({{"a b c d e"}});
    auto post = make_posterior(corpus, {{{1.0}}},
                               {std::vector<double>(5, 0.2)});
    auto picks = klsum_select(single_cluster({DaRef{0, 0}}), corpus, post, 2);
    CHECK(picks.empty());
  }
}

TEST_CASE("klsum greedy objective is non-increasing along the pick sequence") {
  std::mt19937 gen(404);
  auto simplex = [&](std::size_t k) {
    std::vector<double> p(k);
    double sum = 0.0;
    for (auto& x : p) {
      x = double(gen() % 1000 + 1);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    return p;
  };
  auto smoothed_kl = [](const std::vector<double>& pc,
                        const std::vector<double>& ps) {
    constexpr double s = 1e-6;
    double pn = 0.0, qn = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      pn += pc[i] + s;
      qn += ps[i] + s;
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      double p = (pc[i] + s) / pn, q = (ps[i] + s) / qn;
      kl += p * std::log(p / q);
    }
    return kl;
  };

  static const std::vector<std::string> words = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + int(gen() % 5);
    int K = 2 + int(gen() % 3);
    std::vector<std::string> texts;
    for (int d = 0; d < n; ++d) {
      int len = 1 + int(gen() % 5);
      std::string text;
      for (int t = 0; t < len; ++t) {
        if (t) text += ' ';
        text += words[gen() % words.size()];
      }
      texts.push_back(text);
    }
    auto corpus = test::make_corpus({texts});
    std::vector<std::vector<std::vector<double>>> rows(1);
    for (int d = 0; d < n; ++d) rows[0].push_back(simplex(std::size_t(K)));
    std::vector<std::vector<double>> phi;
    for (int k = 0; k < K; ++k) phi.push_back(simplex(corpus.vocabulary.size()));
    auto post = make_posterior(corpus, rows, phi);

    DecisionCluster cluster;
    cluster.decision_id = "r";
    for (int d = 0; d < n; ++d) cluster.center_das.push_back(DaRef{0, d});
    int budget = 3 + int(gen() % 10);

    auto picks = klsum_select(cluster, corpus, post, budget);
    auto pc = p_topic_given_cluster(cluster, corpus, post);

    double previous = std::numeric_limits<double>::infinity();
    std::vector<double> acc(std::size_t(K), 0.0);
    double weight = 0.0;
    for (DaRef ref : picks) {
      double w = double(corpus.da(ref).tokens.size());
      const auto& row = rows[0][std::size_t(ref.da)];
      for (std::size_t k = 0; k < std::size_t(K); ++k) acc[k] += w * row[k];
      weight += w;
      std::vector<double> mean(std::size_t(K), 0.0);
      if (weight > 0)
        for (std::size_t k = 0; k < std::size_t(K); ++k) mean[k] = acc[k] / weight;
      double kl = smoothed_kl(pc, mean);
      CHECK(kl <= previous + 1e-12);
      previous = kl;
    }
  }
}

TEST_CASE("baseline_longest") {
  auto corpus = test::make_corpus({{"a b c d e", "a b c", "x y z w"}});
  auto cluster =
      single_cluster({DaRef{0, 0}, DaRef{0, 1}, DaRef{0, 2}});
  auto result = baseline_longest(cluster, corpus);
  CHECK(result.selected_das == std::vector<DaRef>{DaRef{0, 0}});
  CHECK(result.mode == SummaryMode::kUtteranceLevel);

  auto tie_corpus = test::make_corpus({{"a b c d", "e f g h"}});
  auto tie = baseline_longest(single_cluster({DaRef{0, 0}, DaRef{0, 1}}),
                              tie_corpus);
  CHECK(tie.selected_das == std::vector<DaRef>{DaRef{0, 0}});
}

TEST_CASE("baseline_prototype") {
  SUBCASE("single DA wins trivially") {
    auto corpus = test::make_corpus({{"apple banana", "other words"}});
    auto result = baseline_prototype(single_cluster({DaRef{0, 0}}), corpus);
    CHECK(result.selected_das == std::vector<DaRef>{DaRef{0, 0}});
  }

  SUBCASE("identical DAs tie toward the lower index") {
    auto corpus =
        test::make_corpus({{"apple banana", "apple banana", "cherry dates"}});
    auto result = baseline_prototype(
        single_cluster({DaRef{0, 0}, DaRef{0, 1}}), corpus);
    CHECK(result.selected_das == std::vector<DaRef>{DaRef{0, 0}});
  }

  SUBCASE("three-DA arithmetic oracle") {
    // meeting: d0 = d1 = {apple banana}, d2 = {cherry dates}
    // idf(apple) = idf(banana) = ln(3/2); idf(cherry) = idf(dates) = ln(3)
    auto corpus =
        test::make_corpus({{"apple banana", "apple banana", "cherry dates"}});
    double low = std::log(3.0 / 2.0), high = std::log(3.0);
    // centroid = {apple: 2low/3, banana: 2low/3, cherry: high/3, dates: high/3}
    double ca = 2 * low / 3, cc = high / 3;
    double cnorm = std::sqrt(2 * ca * ca + 2 * cc * cc);
    double cos01 = (2 * low * ca) / (std::sqrt(2.0) * low * cnorm);
    double cos2 = (2 * high * cc) / (std::sqrt(2.0) * high * cnorm);
    auto cluster =
        single_cluster({DaRef{0, 0}, DaRef{0, 1}, DaRef{0, 2}});
    auto result = baseline_prototype(cluster, corpus);
    DaRef expect = cos2 > cos01 ? DaRef{0, 2} : DaRef{0, 0};
    CHECK(result.selected_das == std::vector<DaRef>{expect});
  }

  SUBCASE("all-zero vectors fall back to longest") {
    auto corpus = test::make_corpus({{"same same", "same"}});
    auto result = baseline_prototype(
        single_cluster({DaRef{0, 0}, DaRef{0, 1}}), corpus);
    CHECK(result.selected_das == std::vector<DaRef>{DaRef{0, 0}});
  }
}

TEST_CASE("upperbound") {
  auto corpus = test::make_corpus({{"remote latex cost"}});
  corpus.stopword_strings = {"the", "will", "have", "a"};

  Decision gold;
  gold.decision_id = "d1";
  gold.abstract_text = "The remote will have a latex case.";
  gold.abstract_tokens =
      tokenize_normalize(gold.abstract_text, corpus.config);

  auto cluster = single_cluster({DaRef{0, 0}});
  auto result = upperbound(cluster, corpus, gold);
  CHECK(result.tokens == std::vector<std::string>{"remote", "latex"});

  SUBCASE("disjoint vocabularies give an empty summary") {
    Decision other;
    other.decision_id = "d2";
    other.abstract_tokens = {"completely", "different"};
    CHECK(upperbound(cluster, corpus, other).tokens.empty());
  }

  SUBCASE("stemming matches inflected forms") {
    auto push_corpus = test::make_corpus({{"pushbuttons everywhere"}});
    Decision push;
    push.decision_id = "d3";
    push.abstract_tokens = {"pushbuttons"};
    auto s = upperbound(single_cluster({DaRef{0, 0}}), push_corpus, push);
    CHECK(s.tokens == std::vector<std::string>{"pushbuttons"});
  }

  SUBCASE("precision against the gold abstract is 1 after preprocessing") {
    RougeConfig rc;
    auto sys = preprocess_for_rouge(result.tokens, rc, corpus.stopword_strings);
    auto ref =
        preprocess_for_rouge(gold.abstract_tokens, rc, corpus.stopword_strings);
    auto score = rouge_n(sys, ref, 1);
    CHECK(score.precision == doctest::Approx(1.0));
  }
}

TEST_CASE("zero-probability guards") {
  // word "beta" has zero mass under every topic
  auto corpus = test::make_corpus({{"alpha beta", "alpha"}});
  auto post = make_posterior(corpus,
                             {{{0.6, 0.4}, {0.5, 0.5}}},
                             {{1.0, 0.0}, {1.0, 0.0}});
  auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}});

  SUBCASE("onetopic treats the dead word as uniform") {
    auto scores = score_onetopic(cluster, corpus, post);
    CHECK(scores[0] + scores[1] == doctest::Approx(1.0));
    for (double s : scores) CHECK(s >= 0.0);
  }

  SUBCASE("tmm floors the dead factor instead of -inf") {
    auto scores = score_tmm(cluster, corpus, post);
    for (double s : scores) {
      CHECK(std::isfinite(s));
      CHECK(s <= 0.0);
    }
    // both alpha tokens have mixture probability 1, so each DA's score is
    // exactly the one floored factor
    CHECK(scores[0] == doctest::Approx(std::log(1e-300)));
    CHECK(scores[1] == doctest::Approx(std::log(1e-300)));
  }
}

TEST_CASE("top_das ranks by score with stable ties") {
  auto corpus = test::make_corpus({{"a", "b", "c"}});
  auto cluster = single_cluster({DaRef{0, 0}, DaRef{0, 1}, DaRef{0, 2}});
  std::vector<double> scores = {0.2, 0.5, 0.2};
  auto top = top_das(cluster, scores, 2);
  CHECK(top == std::vector<DaRef>{DaRef{0, 1}, DaRef{0, 0}});
}

}  // TEST_SUITE
