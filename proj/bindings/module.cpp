#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "decsum/corpus.hpp"
#include "decsum/experiment.hpp"
#include "decsum/porter.hpp"
#include "decsum/rouge.hpp"
#include "decsum/summarize.hpp"
#include "decsum/textstats.hpp"
#include "decsum/topic_models.hpp"

namespace py = pybind11;
using namespace decsum;

namespace {

ModelConfig build_model_config(const std::string& kind, int num_topics,
                               int iterations, int burn_in, int sample_interval,
                               std::uint64_t seed) {
  ModelConfig c;
  c.kind = model_kind_from_string(kind);
  c.num_topics = num_topics;
  c.iterations = iterations;
  c.burn_in = burn_in;
  c.sample_interval = sample_interval;
  c.seed = seed;
  return c;
}

ContextKind context_kind_from_string(const std::string& s) {
  if (s == "adjacent") return ContextKind::kAdjacent;
  if (s == "tfidf") return ContextKind::kTfIdf;
  throw std::invalid_argument("context kind must be adjacent|tfidf");
}

WordMode word_mode_from_string(const std::string& s) {
  if (s == "one") return WordMode::kOne;
  if (s == "multi") return WordMode::kMulti;
  throw std::invalid_argument("word mode must be one|multi");
}

py::dict score_to_dict(const RougeScore& s) {
  py::dict d;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["f1"] = s.f1;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "token-level decision summarization over meeting transcripts";

  py::class_<DaRef>(m, "DaRef")
      .def(py::init<int, int>(), py::arg("meeting"), py::arg("da"))
      .def_readonly("meeting", &DaRef::meeting)
      .def_readonly("da", &DaRef::da)
      .def("__repr__",
           [](const DaRef& r) {
             return "DaRef(" + std::to_string(r.meeting) + ", " +
                    std::to_string(r.da) + ")";
           })
      .def("__eq__", [](const DaRef& a, const DaRef& b) { return a == b; })
      .def("__hash__", [](const DaRef& r) {
        long long key = (static_cast<long long>(r.meeting) << 32) |
                        static_cast<unsigned int>(r.da);
        return std::hash<long long>()(key);
      });

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly(
          "num_meetings",
          [](const Corpus& c) { return c.meetings.size(); })
      .def_property_readonly("num_das",
                             [](const Corpus& c) { return c.total_das(); })
      .def_property_readonly("num_tokens",
                             [](const Corpus& c) { return c.total_tokens(); })
      .def_property_readonly(
          "num_decisions",
          [](const Corpus& c) { return c.decisions.size(); })
      .def_property_readonly(
          "vocab_size", [](const Corpus& c) { return c.vocabulary.size(); })
      .def("meeting_id",
           [](const Corpus& c, int meeting) {
             return c.meetings.at(std::size_t(meeting)).meeting_id;
           })
      .def("da_text",
           [](const Corpus& c, int meeting, int da) {
             return c.da(DaRef{meeting, da}).raw_text;
           })
      .def("da_tokens",
           [](const Corpus& c, int meeting, int da) {
             std::vector<std::string> out;
             for (TokenId t : c.da(DaRef{meeting, da}).tokens)
               out.push_back(c.vocabulary.token(t));
             return out;
           })
      .def("decision_abstract", [](const Corpus& c, const std::string& id) {
        const Decision* d = c.find_decision(id);
        if (!d) throw std::invalid_argument("unknown decision " + id);
        return d->abstract_text;
      });

  py::class_<DecisionCluster>(m, "DecisionCluster")
      .def_readonly("decision_id", &DecisionCluster::decision_id)
      .def_readonly("center_das", &DecisionCluster::center_das)
      .def_property_readonly("context_das",
                             [](const DecisionCluster& c) {
                               std::vector<std::pair<DaRef, DaRef>> out =
                                   c.context_das;
                               return out;
                             })
      .def_property_readonly("word_mode", [](const DecisionCluster& c) {
        return c.word_mode == WordMode::kOne ? "one" : "multi";
      });

  py::class_<TopicModelPosterior>(m, "Posterior")
      .def_property_readonly("num_topics", &TopicModelPosterior::num_topics)
      .def("p_topic_given_da",
           [](const TopicModelPosterior& p, int meeting, int da) {
             auto row = p.topic_row(DaRef{meeting, da});
             return std::vector<double>(row.begin(), row.end());
           })
      .def("p_word_given_topic",
           [](const TopicModelPosterior& p, int topic) {
             return p.p_word_given_topic.at(std::size_t(topic));
           })
      .def("save", [](const TopicModelPosterior& p, const std::string& path) {
        save_posterior(p, path);
      });

  py::class_<SummaryResult>(m, "Summary")
      .def_readonly("decision_id", &SummaryResult::decision_id)
      .def_readonly("tokens", &SummaryResult::tokens)
      .def_readonly("selected_das", &SummaryResult::selected_das)
      .def_property_readonly("mode", [](const SummaryResult& s) {
        return s.mode == SummaryMode::kTokenLevel ? "token" : "utterance";
      });

  m.def(
      "tokenize",
      [](const std::string& text) {
        return tokenize_normalize(text, PreprocessConfig{});
      },
      py::arg("text"));

  m.def("porter_stem",
        [](const std::string& word) { return porter_stem(word); },
        py::arg("word"));

  m.def(
      "load_corpus",
      [](const std::string& dir, const std::string& stopwords) {
        PreprocessConfig config;
        config.stopwords_path = stopwords;
        return load_corpus(dir, config);
      },
      py::arg("dir"), py::arg("stopwords") = "");

  m.def("true_clusters", &true_clusters, py::arg("corpus"));

  m.def(
      "train",
      [](const Corpus& corpus, const std::string& kind, int num_topics,
         int iterations, int burn_in, int sample_interval,
         std::uint64_t seed) {
        return train(corpus, build_model_config(kind, num_topics, iterations,
                                                burn_in, sample_interval, seed));
      },
      py::arg("corpus"), py::arg("kind") = "local_lda",
      py::arg("num_topics") = 5, py::arg("iterations") = 200,
      py::arg("burn_in") = 100, py::arg("sample_interval") = 10,
      py::arg("seed") = 1);

  m.def("load_posterior", &load_posterior, py::arg("path"));

  m.def("domsum", &domsum, py::arg("cluster"), py::arg("corpus"),
        py::arg("posterior"));

  m.def(
      "attach_context",
      [](const DecisionCluster& cluster, const Corpus& corpus,
         const std::string& kind, const std::string& word_mode, int before,
         int after, int tfidf_count) {
        ContextOptions options;
        options.adjacent_before = before;
        options.adjacent_after = after;
        options.tfidf_count = tfidf_count;
        return attach_context(cluster, corpus, context_kind_from_string(kind),
                              word_mode_from_string(word_mode), options);
      },
      py::arg("cluster"), py::arg("corpus"), py::arg("kind") = "adjacent",
      py::arg("word_mode") = "one", py::arg("adjacent_before") = 5,
      py::arg("adjacent_after") = 5, py::arg("tfidf_count") = 10);

  m.def("score_onetopic", &score_onetopic, py::arg("cluster"),
        py::arg("corpus"), py::arg("posterior"));
  m.def("score_multitopic", &score_multitopic, py::arg("cluster"),
        py::arg("corpus"), py::arg("posterior"));
  m.def("score_tmm", &score_tmm, py::arg("cluster"), py::arg("corpus"),
        py::arg("posterior"));
  m.def("klsum_select", &klsum_select, py::arg("cluster"), py::arg("corpus"),
        py::arg("posterior"), py::arg("token_budget") = 40);
  m.def("baseline_longest", &baseline_longest, py::arg("cluster"),
        py::arg("corpus"));
  m.def("baseline_prototype", &baseline_prototype, py::arg("cluster"),
        py::arg("corpus"));
  m.def(
      "upperbound",
      [](const DecisionCluster& cluster, const Corpus& corpus,
         const std::string& decision_id) {
        const Decision* gold = corpus.find_decision(decision_id);
        if (!gold)
          throw std::invalid_argument("unknown decision " + decision_id);
        return upperbound(cluster, corpus, *gold);
      },
      py::arg("cluster"), py::arg("corpus"), py::arg("decision_id"));

  m.def(
      "rouge_n",
      [](const std::vector<std::string>& sys,
         const std::vector<std::string>& ref, int n) {
        return score_to_dict(rouge_n(sys, ref, n));
      },
      py::arg("system"), py::arg("reference"), py::arg("n") = 1);
  m.def(
      "rouge_su4",
      [](const std::vector<std::string>& sys,
         const std::vector<std::string>& ref, int max_skip) {
        return score_to_dict(rouge_su4(sys, ref, max_skip));
      },
      py::arg("system"), py::arg("reference"), py::arg("max_skip") = 4);
  m.def(
      "preprocess_for_rouge",
      [](const std::vector<std::string>& tokens,
         const std::vector<std::string>& stopwords, bool stem,
         bool remove_stopwords) {
        RougeConfig config;
        config.stem = stem;
        config.remove_stopwords = remove_stopwords;
        std::unordered_set<std::string> stops(stopwords.begin(),
                                              stopwords.end());
        return preprocess_for_rouge(tokens, config, stops);
      },
      py::arg("tokens"), py::arg("stopwords") = std::vector<std::string>{},
      py::arg("stem") = true, py::arg("remove_stopwords") = true);

  m.def(
      "run_experiment",
      [](const std::string& config_path, std::optional<std::uint64_t> seed,
         std::optional<std::string> output_dir) {
        auto cfg = load_experiment_config(config_path, seed, output_dir);
        auto diagnostics = validate(cfg);
        if (!diagnostics.empty())
          throw std::invalid_argument("invalid config: " + diagnostics.front());
        auto manifest = run(cfg);
        if (manifest.failed)
          throw std::runtime_error("run failed: " + manifest.failure);
        py::dict out;
        out["output_dir"] = cfg.output_dir;
        out["artifacts"] = [&] {
          std::vector<std::string> paths;
          for (const auto& a : manifest.artifacts) paths.push_back(a.path);
          return paths;
        }();
        return out;
      },
      py::arg("config_path"), py::arg("seed") = std::nullopt,
      py::arg("output_dir") = std::nullopt);

  m.def(
      "validate_config",
      [](const std::string& config_path) {
        return validate(load_experiment_config(config_path));
      },
      py::arg("config_path"));
}
