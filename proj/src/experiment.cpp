#include "decsum/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include "config_json.hpp"
#include "decsum/textstats.hpp"
#include "decsum/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace decsum {

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::kDomsum: {
      if (!with_context) return "domsum";
      std::string k = context_kind == ContextKind::kAdjacent ? "adjacent" : "tfidf";
      std::string w = word_mode == WordMode::kOne ? "one" : "multi";
      return "domsum+context(" + k + "," + w + ")";
    }
    case Kind::kOneTopic: return "onetopic";
    case Kind::kMultiTopic: return "multitopic";
    case Kind::kTmmSum: return "tmmsum";
    case Kind::kKlSum: return "klsum";
    case Kind::kLongest: return "longest";
    case Kind::kPrototype: return "prototype";
    case Kind::kUpperbound: return "upperbound";
  }
  return "?";
}

std::string MethodSpec::file_tag() const {
  std::string out;
  for (char c : name())
    out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

bool MethodSpec::model_dependent() const {
  return kind != Kind::kLongest && kind != Kind::kPrototype &&
         kind != Kind::kUpperbound;
}

MethodSpec parse_method(const std::string& name) {
  MethodSpec m;
  if (name == "domsum") return m;
  if (name.rfind("domsum+context(", 0) == 0 && name.back() == ')') {
    std::string inner = name.substr(15, name.size() - 16);
    auto comma = inner.find(',');
    if (comma != std::string::npos) {
      std::string kind = inner.substr(0, comma);
      std::string mode = inner.substr(comma + 1);
      m.with_context = true;
      if (kind == "adjacent") m.context_kind = ContextKind::kAdjacent;
      else if (kind == "tfidf") m.context_kind = ContextKind::kTfIdf;
      else throw std::invalid_argument("unknown context kind: " + kind);
      if (mode == "one") m.word_mode = WordMode::kOne;
      else if (mode == "multi") m.word_mode = WordMode::kMulti;
      else throw std::invalid_argument("unknown word mode: " + mode);
      return m;
    }
    throw std::invalid_argument("malformed context method: " + name);
  }
  if (name == "onetopic") { m.kind = MethodSpec::Kind::kOneTopic; return m; }
  if (name == "multitopic") { m.kind = MethodSpec::Kind::kMultiTopic; return m; }
  if (name == "tmmsum") { m.kind = MethodSpec::Kind::kTmmSum; return m; }
  if (name == "klsum") { m.kind = MethodSpec::Kind::kKlSum; return m; }
  if (name == "longest") { m.kind = MethodSpec::Kind::kLongest; return m; }
  if (name == "prototype") { m.kind = MethodSpec::Kind::kPrototype; return m; }
  if (name == "upperbound") { m.kind = MethodSpec::Kind::kUpperbound; return m; }
  throw std::invalid_argument("unknown method: " + name);
}

namespace {

std::vector<ModelConfig> default_models(std::uint64_t seed) {
  std::vector<ModelConfig> models;
  for (ModelKind kind : {ModelKind::kLda, ModelKind::kLocalLda,
                         ModelKind::kMgLda, ModelKind::kStm})
    for (int k : {5, 10}) {
      ModelConfig c;
      c.kind = kind;
      c.num_topics = k;
      c.seed = seed;
      models.push_back(c);
    }
  return models;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path,
                                        std::optional<std::uint64_t> seed_override,
                                        std::optional<std::string> output_override) {
  json j = json::parse(read_text_file(path));
  ExperimentConfig cfg;
  cfg.corpus_dir = j.value("corpus_dir", "");
  cfg.output_dir = j.value("output_dir", "");
  cfg.seed = j.value("seed", std::uint64_t(1));
  if (seed_override) cfg.seed = *seed_override;
  if (output_override) cfg.output_dir = *output_override;

  cfg.preprocess.stopwords_path = j.value("stopwords", "");
  cfg.preprocess.min_token_count = j.value("min_token_count", 1);
  cfg.preprocess.strip_bracket_markers = j.value("strip_bracket_markers", true);

  if (j.contains("models")) {
    for (const auto& mj : j["models"]) {
      ModelConfig mc = internal::model_config_from_json(mj);
      if (!mj.contains("seed")) mc.seed = cfg.seed;
      cfg.models.push_back(mc);
    }
  } else {
    cfg.models = default_models(cfg.seed);
  }

  if (j.contains("clustering")) {
    const auto& cj = j["clustering"];
    std::string source = cj.value("source", "true");
    if (source == "true") cfg.clustering.source = ClusteringConfig::Source::kTrue;
    else if (source == "system")
      cfg.clustering.source = ClusteringConfig::Source::kSystem;
    else throw std::invalid_argument("clustering.source must be true|system");
    if (cj.contains("model")) {
      cfg.clustering.feature_model = internal::model_config_from_json(cj["model"]);
      if (!cj["model"].contains("seed")) cfg.clustering.feature_model.seed = cfg.seed;
    } else {
      cfg.clustering.feature_model.kind = ModelKind::kLocalLda;
      cfg.clustering.feature_model.num_topics = 5;
      cfg.clustering.feature_model.seed = cfg.seed;
    }
  } else {
    cfg.clustering.feature_model.kind = ModelKind::kLocalLda;
    cfg.clustering.feature_model.num_topics = 5;
    cfg.clustering.feature_model.seed = cfg.seed;
  }

  if (j.contains("methods"))
    cfg.method_names = j["methods"].get<std::vector<std::string>>();

  if (j.contains("rouge")) {
    const auto& rj = j["rouge"];
    if (rj.contains("variants")) {
      cfg.rouge.variants.clear();
      for (const auto& v : rj["variants"])
        cfg.rouge.variants.push_back(
            rouge_variant_from_string(v.get<std::string>()));
    }
    cfg.rouge.stem = rj.value("stem", true);
    cfg.rouge.remove_stopwords = rj.value("remove_stopwords", true);
    cfg.rouge.su4_max_skip = rj.value("su4_max_skip", 4);
  }

  if (j.contains("context")) {
    const auto& cj = j["context"];
    cfg.context.adjacent_before = cj.value("adjacent_before", 5);
    cfg.context.adjacent_after = cj.value("adjacent_after", 5);
    cfg.context.tfidf_count = cj.value("tfidf_count", 10);
  }
  cfg.klsum_budget = j.value("klsum_budget", 40);
  cfg.utterance_top_n = j.value("utterance_top_n", 1);
  return cfg;
}

namespace {

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["corpus_dir"] = cfg.corpus_dir;
  j["stopwords"] = cfg.preprocess.stopwords_path;
  j["min_token_count"] = cfg.preprocess.min_token_count;
  j["strip_bracket_markers"] = cfg.preprocess.strip_bracket_markers;
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["models"] = json::array();
  for (const auto& mc : cfg.models)
    j["models"].push_back(internal::model_config_to_json(mc));
  j["clustering"] = {
      {"source",
       cfg.clustering.source == ClusteringConfig::Source::kTrue ? "true"
                                                                : "system"},
      {"model", internal::model_config_to_json(cfg.clustering.feature_model)}};
  j["methods"] = cfg.method_names;
  json variants = json::array();
  for (RougeVariant v : cfg.rouge.variants) variants.push_back(to_string(v));
  j["rouge"] = {{"variants", variants},
                {"stem", cfg.rouge.stem},
                {"remove_stopwords", cfg.rouge.remove_stopwords},
                {"su4_max_skip", cfg.rouge.su4_max_skip}};
  j["context"] = {{"adjacent_before", cfg.context.adjacent_before},
                  {"adjacent_after", cfg.context.adjacent_after},
                  {"tfidf_count", cfg.context.tfidf_count}};
  j["klsum_budget"] = cfg.klsum_budget;
  j["utterance_top_n"] = cfg.utterance_top_n;
  return j;
}

}  // namespace

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errs;
  if (cfg.corpus_dir.empty())
    errs.push_back("corpus_dir is required");
  else if (!fs::is_directory(cfg.corpus_dir))
    errs.push_back("corpus_dir does not exist: " + cfg.corpus_dir);
  if (cfg.output_dir.empty()) errs.push_back("output_dir is required");
  if (!cfg.preprocess.stopwords_path.empty() &&
      !fs::is_regular_file(cfg.preprocess.stopwords_path))
    errs.push_back("stopword list does not exist: " +
                   cfg.preprocess.stopwords_path);
  if (cfg.method_names.empty()) errs.push_back("at least one method required");
  for (const auto& name : cfg.method_names) {
    try {
      parse_method(name);
    } catch (const std::exception& e) {
      errs.push_back(e.what());
    }
  }
  for (std::size_t i = 0; i < cfg.models.size(); ++i)
    for (const auto& err : validate_model_config(cfg.models[i]))
      errs.push_back("models[" + std::to_string(i) + "]: " + err);
  if (cfg.clustering.source == ClusteringConfig::Source::kSystem)
    for (const auto& err : validate_model_config(cfg.clustering.feature_model))
      errs.push_back("clustering.model: " + err);
  if (cfg.klsum_budget < 1) errs.push_back("klsum_budget must be >= 1");
  if (cfg.utterance_top_n < 1) errs.push_back("utterance_top_n must be >= 1");
  if (cfg.rouge.su4_max_skip < 0) errs.push_back("su4_max_skip must be >= 0");
  return errs;
}

namespace {

class StageTimer {
 public:
  StageTimer(RunManifest& manifest, std::string name)
      : manifest_(manifest),
        name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}

  void done() {
    manifest_.stages.push_back({name_, elapsed(), "ok"});
    finished_ = true;
  }

  ~StageTimer() {
    if (!finished_) manifest_.stages.push_back({name_, elapsed(), "failed"});
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  RunManifest& manifest_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  bool finished_ = false;
};

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

std::string model_tag(const ModelConfig& c) {
  return to_string(c.kind) + "_K" + std::to_string(c.num_topics);
}

// stable greedy max-overlap assignment of system clusters to decisions
std::vector<std::string> match_clusters_to_decisions(
    const std::vector<std::vector<DaRef>>& clusters,
    const std::vector<const Decision*>& decisions,
    const std::map<std::string, DecisionCluster>& gold) {
  const std::size_t n = clusters.size();
  std::vector<std::string> assigned(n);
  std::vector<bool> cluster_used(n, false);
  std::vector<bool> decision_used(decisions.size(), false);

  struct Cand {
    std::size_t overlap;
    std::size_t cluster;
    std::size_t decision;
  };
  std::vector<Cand> cands;
  for (std::size_t ci = 0; ci < n; ++ci) {
    std::set<DaRef> members(clusters[ci].begin(), clusters[ci].end());
    for (std::size_t di = 0; di < decisions.size(); ++di) {
      const auto& gold_cluster = gold.at(decisions[di]->decision_id);
      std::size_t overlap = 0;
      for (DaRef ref : gold_cluster.center_das)
        if (members.count(ref)) overlap++;
      cands.push_back({overlap, ci, di});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.overlap > b.overlap;
  });
  for (const auto& c : cands) {
    if (cluster_used[c.cluster] || decision_used[c.decision]) continue;
    cluster_used[c.cluster] = true;
    decision_used[c.decision] = true;
    assigned[c.cluster] = decisions[c.decision]->decision_id;
  }
  // leftovers (all overlaps zero) paired in order
  std::size_t di = 0;
  for (std::size_t ci = 0; ci < n; ++ci) {
    if (cluster_used[ci]) continue;
    while (di < decisions.size() && decision_used[di]) di++;
    if (di < decisions.size()) {
      assigned[ci] = decisions[di]->decision_id;
      decision_used[di] = true;
    }
  }
  return assigned;
}

std::map<std::string, DecisionCluster> build_system_clusters(
    const Corpus& corpus, const TopicModelPosterior& features) {
  auto gold = true_clusters(corpus);
  std::map<std::string, DecisionCluster> out;
  for (int mi = 0; mi < int(corpus.meetings.size()); ++mi) {
    const auto& meeting = corpus.meetings[std::size_t(mi)];
    auto decisions = corpus.decisions_of_meeting(mi);
    if (decisions.empty()) continue;

    std::vector<DaRef> drdas;
    for (const auto& da : meeting.das)
      if (da.is_drda && !da.decision_ids.empty())
        drdas.push_back(DaRef{mi, da.da_index});
    if (drdas.empty()) continue;

    int k = std::min<int>(int(decisions.size()), int(drdas.size()));
    std::vector<std::vector<double>> rows;
    rows.reserve(drdas.size());
    for (DaRef ref : drdas) {
      auto row = features.topic_row(ref);
      rows.emplace_back(row.begin(), row.end());
    }
    auto clustering = cluster_drdas(rows, k);

    std::vector<std::vector<DaRef>> clusters;
    for (const auto& members : clustering.clusters) {
      std::vector<DaRef> refs;
      for (int idx : members) refs.push_back(drdas[std::size_t(idx)]);
      clusters.push_back(std::move(refs));
    }
    auto assigned = match_clusters_to_decisions(clusters, decisions, gold);
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      if (assigned[ci].empty()) continue;
      DecisionCluster cluster;
      cluster.decision_id = assigned[ci];
      cluster.center_das = clusters[ci];
      std::sort(cluster.center_das.begin(), cluster.center_das.end());
      out.emplace(cluster.decision_id, std::move(cluster));
    }
  }
  // decisions whose meeting had no DRDAs still appear, as empty clusters
  for (const auto& d : corpus.decisions)
    if (!out.count(d.decision_id)) {
      DecisionCluster empty;
      empty.decision_id = d.decision_id;
      out.emplace(d.decision_id, std::move(empty));
    }
  return out;
}

struct ScoredMethod {
  std::string model;   // model tag or "-" for model-independent methods
  int num_topics = 0;  // 0 when model-independent
  MethodSpec method;
  RougeReport report;
};

std::vector<std::string> summary_tokens_for_scoring(const SummaryResult& s,
                                                    const Corpus& corpus) {
  if (s.mode == SummaryMode::kTokenLevel) return s.tokens;
  std::vector<DaRef> das = s.selected_das;
  std::sort(das.begin(), das.end());
  std::vector<std::string> tokens;
  for (DaRef ref : das)
    for (TokenId w : corpus.da(ref).tokens)
      tokens.push_back(corpus.vocabulary.token(w));
  return tokens;
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
  RunManifest manifest;
  auto fail = [&](const std::string& stage, const std::string& why) {
    manifest.failed = true;
    manifest.failure = stage + ": " + why;
    log_error("stage " + stage + " failed: " + why);
  };

  fs::path out_dir(cfg.output_dir);
  fs::path reports_dir = out_dir / "reports";
  fs::path summaries_dir = out_dir / "summaries";
  fs::path cache_dir = out_dir / "cache";

  auto add_artifact = [&](const fs::path& path, const std::string& content) {
    write_text_file(path.string(), content);
    manifest.artifacts.push_back(
        {fs::relative(path, out_dir).string(), hex64(fnv1a64(content))});
  };

  auto write_manifest = [&] {
    if (cfg.output_dir.empty()) return;  // nowhere to put it
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    json j;
    j["status"] = manifest.failed ? "FAILED" : "ok";
    j["config"] = experiment_config_to_json(cfg);
    if (manifest.failed) j["failure"] = manifest.failure;
    j["stages"] = json::array();
    for (const auto& s : manifest.stages)
      j["stages"].push_back(
          {{"name", s.name}, {"seconds", s.seconds}, {"status", s.status}});
    j["artifacts"] = json::array();
    for (const auto& a : manifest.artifacts)
      j["artifacts"].push_back({{"path", a.path}, {"fnv1a64", a.fnv1a64}});
    write_text_file((out_dir / "manifest.json").string(), j.dump(2));
  };

  try {
    auto diagnostics = validate(cfg);
    if (!diagnostics.empty())
      throw std::invalid_argument("invalid config: " + diagnostics.front());
    fs::create_directories(reports_dir);
    fs::create_directories(summaries_dir);
    fs::create_directories(cache_dir);

    // ---- load corpus ----
    Corpus corpus;
    {
      StageTimer t(manifest, "load_corpus");
      corpus = load_corpus(cfg.corpus_dir, cfg.preprocess);
      t.done();
    }

    std::vector<MethodSpec> methods;
    for (const auto& name : cfg.method_names) methods.push_back(parse_method(name));

    auto train_cached = [&](const ModelConfig& mc) -> TopicModelPosterior {
      fs::path cache_path =
          cache_dir / ("posterior_" + model_tag(mc) + "_seed" +
                       std::to_string(mc.seed) + ".json");
      if (fs::exists(cache_path)) {
        try {
          auto cached = load_posterior(cache_path.string());
          if (cached.vocab_fingerprint == corpus.vocabulary_fingerprint() &&
              internal::model_config_to_json(cached.config) ==
                  internal::model_config_to_json(mc)) {
            log_info("posterior cache hit: " + cache_path.string());
            return cached;
          }
        } catch (const std::exception& e) {
          log_warn("ignoring unreadable posterior cache: " + std::string(e.what()));
        }
      }
      auto posterior = train(corpus, mc);
      save_posterior(posterior, cache_path.string());
      manifest.artifacts.push_back(
          {fs::relative(cache_path, out_dir).string(),
           hex64(fnv1a64_file(cache_path.string()))});
      return posterior;
    };

    // ---- clusters ----
    std::map<std::string, DecisionCluster> clusters;
    {
      StageTimer t(manifest, "build_clusters");
      if (cfg.clustering.source == ClusteringConfig::Source::kTrue) {
        clusters = true_clusters(corpus);
      } else {
        auto features = train_cached(cfg.clustering.feature_model);
        clusters = build_system_clusters(corpus, features);
      }
      t.done();
    }

    auto gold_tokens = [&](const std::string& decision_id) {
      const Decision* d = corpus.find_decision(decision_id);
      if (!d) throw std::runtime_error("unresolved decision id " + decision_id);
      return preprocess_for_rouge(d->abstract_tokens, cfg.rouge,
                                  corpus.stopword_strings);
    };

    auto score_summaries =
        [&](const std::map<std::string, SummaryResult>& summaries) {
          std::vector<DecisionRouge> rows;
          for (const auto& [decision_id, summary] : summaries) {
            auto sys = preprocess_for_rouge(
                summary_tokens_for_scoring(summary, corpus), cfg.rouge,
                corpus.stopword_strings);
            auto ref = gold_tokens(decision_id);
            DecisionRouge row;
            row.decision_id = decision_id;
            for (RougeVariant v : cfg.rouge.variants)
              row.scores[v] = score_variant(v, sys, ref, cfg.rouge);
            rows.push_back(std::move(row));
          }
          return aggregate(rows);
        };

    auto summarize_one = [&](const MethodSpec& method,
                             const DecisionCluster& cluster,
                             const TopicModelPosterior* posterior)
        -> SummaryResult {
      if (cluster.center_das.empty()) {
        SummaryResult empty;
        empty.decision_id = cluster.decision_id;
        empty.mode = method.kind == MethodSpec::Kind::kDomsum ||
                             method.kind == MethodSpec::Kind::kUpperbound
                         ? SummaryMode::kTokenLevel
                         : SummaryMode::kUtteranceLevel;
        return empty;
      }
      switch (method.kind) {
        case MethodSpec::Kind::kDomsum: {
          if (!method.with_context) return domsum(cluster, corpus, *posterior);
          auto extended = attach_context(cluster, corpus, method.context_kind,
                                         method.word_mode, cfg.context);
          return domsum(extended, corpus, *posterior);
        }
        case MethodSpec::Kind::kOneTopic:
        case MethodSpec::Kind::kMultiTopic:
        case MethodSpec::Kind::kTmmSum: {
          std::vector<double> scores;
          if (method.kind == MethodSpec::Kind::kOneTopic)
            scores = score_onetopic(cluster, corpus, *posterior);
          else if (method.kind == MethodSpec::Kind::kMultiTopic)
            scores = score_multitopic(cluster, corpus, *posterior);
          else
            scores = score_tmm(cluster, corpus, *posterior);
          SummaryResult s;
          s.decision_id = cluster.decision_id;
          s.mode = SummaryMode::kUtteranceLevel;
          s.selected_das = top_das(cluster, scores, cfg.utterance_top_n);
          return s;
        }
        case MethodSpec::Kind::kKlSum: {
          SummaryResult s;
          s.decision_id = cluster.decision_id;
          s.mode = SummaryMode::kUtteranceLevel;
          s.selected_das =
              klsum_select(cluster, corpus, *posterior, cfg.klsum_budget);
          return s;
        }
        case MethodSpec::Kind::kLongest:
          return baseline_longest(cluster, corpus);
        case MethodSpec::Kind::kPrototype:
          return baseline_prototype(cluster, corpus);
        case MethodSpec::Kind::kUpperbound: {
          const Decision* gold = corpus.find_decision(cluster.decision_id);
          if (!gold)
            throw std::runtime_error("unresolved decision id " +
                                     cluster.decision_id);
          return upperbound(cluster, corpus, *gold);
        }
      }
      throw std::logic_error("unreachable");
    };

    std::vector<ScoredMethod> scored;

    auto run_method = [&](const MethodSpec& method, const std::string& model,
                          int num_topics, const TopicModelPosterior* posterior) {
      std::map<std::string, SummaryResult> summaries;
      std::string summary_lines;
      for (const auto& [decision_id, cluster] : clusters) {
        auto summary = summarize_one(method, cluster, posterior);
        summary_lines += summary_to_json(summary, corpus);
        summary_lines += "\n";
        summaries.emplace(decision_id, std::move(summary));
      }
      auto report = score_summaries(summaries);
      std::string tag = (model == "-" ? std::string("baseline")
                                      : model) +
                        "__" + method.file_tag();
      add_artifact(summaries_dir / (tag + ".jsonl"), summary_lines);
      add_artifact(reports_dir / (tag + ".csv"), report_to_csv(report));
      scored.push_back({model, num_topics, method, std::move(report)});
    };

    // model-independent methods once
    {
      StageTimer t(manifest, "baseline_methods");
      for (const auto& method : methods)
        if (!method.model_dependent()) run_method(method, "-", 0, nullptr);
      t.done();
    }

    const bool any_model_dependent =
        std::any_of(methods.begin(), methods.end(),
                    [](const MethodSpec& m) { return m.model_dependent(); });
    if (any_model_dependent) {
      for (const auto& mc : cfg.models) {
        StageTimer t(manifest, "model_" + model_tag(mc));
        auto posterior = train_cached(mc);
        for (const auto& method : methods)
          if (method.model_dependent())
            run_method(method, model_tag(mc), mc.num_topics, &posterior);
        t.done();
      }
    }

    // ---- comparison table ----
    {
      StageTimer t(manifest, "comparison_table");
      std::string md =
          "| Method | Model | Topics | R-1 Prec | R-1 Rec | R-1 F1 | R-2 F1 | "
          "R-SU4 F1 |\n|---|---|---|---|---|---|---|---|\n";
      char buf[64];
      auto cell = [&](const RougeReport& r, RougeVariant v,
                      double RougeScore::*field) {
        auto it = r.macro.find(v);
        if (it == r.macro.end()) return std::string("-");
        std::snprintf(buf, sizeof buf, "%.2f", (it->second.*field) * 100.0);
        return std::string(buf);
      };
      for (const auto& s : scored) {
        md += "| " + s.method.name() + " | " + s.model + " | " +
              (s.num_topics > 0 ? std::to_string(s.num_topics) : "-") + " | " +
              cell(s.report, RougeVariant::kRouge1, &RougeScore::precision) +
              " | " +
              cell(s.report, RougeVariant::kRouge1, &RougeScore::recall) +
              " | " + cell(s.report, RougeVariant::kRouge1, &RougeScore::f1) +
              " | " + cell(s.report, RougeVariant::kRouge2, &RougeScore::f1) +
              " | " + cell(s.report, RougeVariant::kRougeSu4, &RougeScore::f1) +
              " |\n";
      }
      add_artifact(out_dir / "comparison.md", md);
      t.done();
    }
  } catch (const std::exception& e) {
    std::string stage =
        manifest.stages.empty() ? "setup" : manifest.stages.back().name;
    fail(stage, e.what());
  }

  write_manifest();
  return manifest;
}

}  // namespace decsum
