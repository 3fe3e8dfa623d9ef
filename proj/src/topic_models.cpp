#include "decsum/topic_models.hpp"

#include <stdexcept>

#include "decsum/util.hpp"
#include "json.hpp"
#include "sampler_internal.hpp"

using nlohmann::json;

namespace decsum {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLda: return "lda";
    case ModelKind::kLocalLda: return "local_lda";
    case ModelKind::kMgLda: return "mglda";
    case ModelKind::kStm: return "stm";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lda") return ModelKind::kLda;
  if (name == "local_lda") return ModelKind::kLocalLda;
  if (name == "mglda") return ModelKind::kMgLda;
  if (name == "stm") return ModelKind::kStm;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::vector<std::string> validate_model_config(const ModelConfig& c) {
  std::vector<std::string> errs;
  if (c.num_topics < 1) errs.push_back("num_topics must be >= 1");
  if (!(c.alpha > 0)) errs.push_back("alpha must be > 0");
  if (!(c.beta > 0)) errs.push_back("beta must be > 0");
  if (!(c.mg_alpha_gl > 0)) errs.push_back("mg_alpha_gl must be > 0");
  if (!(c.mg_alpha_loc > 0)) errs.push_back("mg_alpha_loc must be > 0");
  if (!(c.mg_alpha_mix > 0)) errs.push_back("mg_alpha_mix must be > 0");
  if (!(c.mg_gamma > 0)) errs.push_back("mg_gamma must be > 0");
  if (c.mg_window < 1) errs.push_back("mg_window must be >= 1");
  if (!(c.stm_alpha > 0)) errs.push_back("stm_alpha must be > 0");
  if (!(c.stm_a >= 0 && c.stm_a < 1)) errs.push_back("stm_a must be in [0, 1)");
  if (!(c.stm_b > -c.stm_a)) errs.push_back("stm_b must be > -stm_a");
  if (c.iterations < 1) errs.push_back("iterations must be >= 1");
  if (c.burn_in < 0 || c.burn_in >= c.iterations)
    errs.push_back("burn_in must be in [0, iterations)");
  if (c.sample_interval < 1) errs.push_back("sample_interval must be >= 1");
  return errs;
}

std::span<const double> TopicModelPosterior::topic_row(DaRef ref) const {
  return p_topic_given_da.at(std::size_t(ref.meeting)).at(std::size_t(ref.da));
}

bool TopicModelPosterior::has_row(DaRef ref) const {
  if (ref.meeting < 0 || std::size_t(ref.meeting) >= p_topic_given_da.size())
    return false;
  const auto& m = p_topic_given_da[std::size_t(ref.meeting)];
  return ref.da >= 0 && std::size_t(ref.da) < m.size() &&
         !m[std::size_t(ref.da)].empty();
}

std::unique_ptr<GibbsSampler> make_sampler(const Corpus& corpus,
                                           const ModelConfig& config) {
  auto errs = validate_model_config(config);
  if (!errs.empty())
    throw std::invalid_argument("invalid model config: " + errs.front());
  if (corpus.vocabulary.size() == 0)
    throw std::invalid_argument("cannot train on an empty vocabulary");
  switch (config.kind) {
    case ModelKind::kLda:
    case ModelKind::kLocalLda:
      return internal::make_lda_sampler(corpus, config);
    case ModelKind::kMgLda:
      return internal::make_mglda_sampler(corpus, config);
    case ModelKind::kStm:
      return internal::make_stm_sampler(corpus, config);
  }
  throw std::logic_error("unreachable");
}

namespace {

struct PosteriorAccumulator {
  TopicModelPosterior sum;
  int count = 0;

  void add(TopicModelPosterior&& snap) {
    if (count == 0) {
      sum = std::move(snap);
    } else {
      for (std::size_t m = 0; m < sum.p_topic_given_da.size(); ++m)
        for (std::size_t d = 0; d < sum.p_topic_given_da[m].size(); ++d)
          for (std::size_t k = 0; k < sum.p_topic_given_da[m][d].size(); ++k)
            sum.p_topic_given_da[m][d][k] += snap.p_topic_given_da[m][d][k];
      for (std::size_t k = 0; k < sum.p_word_given_topic.size(); ++k)
        for (std::size_t w = 0; w < sum.p_word_given_topic[k].size(); ++w)
          sum.p_word_given_topic[k][w] += snap.p_word_given_topic[k][w];
    }
    count++;
  }

  TopicModelPosterior mean() {
    for (auto& m : sum.p_topic_given_da)
      for (auto& d : m)
        for (auto& x : d) x /= double(count);
    for (auto& k : sum.p_word_given_topic)
      for (auto& x : k) x /= double(count);
    return std::move(sum);
  }
};

}  // namespace

TopicModelPosterior train(const Corpus& corpus, const ModelConfig& config) {
  auto sampler = make_sampler(corpus, config);
  PosteriorAccumulator acc;
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    sampler->sweep();
    if (sweep > config.burn_in &&
        (sweep - config.burn_in) % config.sample_interval == 0)
      acc.add(sampler->estimate());
  }
  if (acc.count == 0) acc.add(sampler->estimate());
  log_debug("train " + to_string(config.kind) + " K=" +
            std::to_string(config.num_topics) + ": averaged " +
            std::to_string(acc.count) + " snapshots");
  return acc.mean();
}

std::vector<double> lda_conditional(std::span<const int> n_dk,
                                    std::span<const int> n_kw,
                                    std::span<const int> n_k, double alpha,
                                    double beta, std::size_t vocab_size) {
  if (n_dk.size() != n_kw.size() || n_dk.size() != n_k.size())
    throw std::invalid_argument("lda_conditional: count length mismatch");
  std::vector<double> scores(n_dk.size());
  for (std::size_t k = 0; k < n_dk.size(); ++k)
    scores[k] = (double(n_dk[k]) + alpha) * (double(n_kw[k]) + beta) /
                (double(n_k[k]) + double(vocab_size) * beta);
  return scores;
}

namespace {

json config_to_json(const ModelConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["num_topics"] = c.num_topics;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["mg_alpha_gl"] = c.mg_alpha_gl;
  j["mg_alpha_loc"] = c.mg_alpha_loc;
  j["mg_alpha_mix"] = c.mg_alpha_mix;
  j["mg_alpha_mix_gl"] = c.mg_alpha_mix_gl;
  j["mg_gamma"] = c.mg_gamma;
  j["mg_window"] = c.mg_window;
  j["stm_alpha"] = c.stm_alpha;
  j["stm_a"] = c.stm_a;
  j["stm_b"] = c.stm_b;
  j["iterations"] = c.iterations;
  j["burn_in"] = c.burn_in;
  j["sample_interval"] = c.sample_interval;
  j["seed"] = c.seed;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.kind = model_kind_from_string(j.at("kind").get<std::string>());
  c.num_topics = j.value("num_topics", c.num_topics);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.mg_alpha_gl = j.value("mg_alpha_gl", c.mg_alpha_gl);
  c.mg_alpha_loc = j.value("mg_alpha_loc", c.mg_alpha_loc);
  c.mg_alpha_mix = j.value("mg_alpha_mix", c.mg_alpha_mix);
  c.mg_alpha_mix_gl = j.value("mg_alpha_mix_gl", c.mg_alpha_mix_gl);
  c.mg_gamma = j.value("mg_gamma", c.mg_gamma);
  c.mg_window = j.value("mg_window", c.mg_window);
  c.stm_alpha = j.value("stm_alpha", c.stm_alpha);
  c.stm_a = j.value("stm_a", c.stm_a);
  c.stm_b = j.value("stm_b", c.stm_b);
  c.iterations = j.value("iterations", c.iterations);
  c.burn_in = j.value("burn_in", c.burn_in);
  c.sample_interval = j.value("sample_interval", c.sample_interval);
  c.seed = j.value("seed", c.seed);
  return c;
}

}  // namespace

void save_posterior(const TopicModelPosterior& posterior,
                    const std::string& path) {
  json j;
  j["config"] = config_to_json(posterior.config);
  j["vocab_fingerprint"] = posterior.vocab_fingerprint;
  j["p_topic_given_da"] = posterior.p_topic_given_da;
  j["p_word_given_topic"] = posterior.p_word_given_topic;
  write_text_file(path, j.dump());
}

TopicModelPosterior load_posterior(const std::string& path) {
  json j = json::parse(read_text_file(path));
  TopicModelPosterior post;
  post.config = config_from_json(j.at("config"));
  post.vocab_fingerprint = j.at("vocab_fingerprint").get<std::uint64_t>();
  post.p_topic_given_da =
      j.at("p_topic_given_da")
          .get<std::vector<std::vector<std::vector<double>>>>();
  post.p_word_given_topic =
      j.at("p_word_given_topic").get<std::vector<std::vector<double>>>();
  return post;
}

namespace internal {

nlohmann::json model_config_to_json(const ModelConfig& c) {
  return config_to_json(c);
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  return config_from_json(j);
}

}  // namespace internal

}  // namespace decsum
