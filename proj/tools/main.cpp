#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decsum/experiment.hpp"
#include "decsum/rouge.hpp"
#include "decsum/topic_models.hpp"
#include "decsum/util.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

int cmd_run(const std::string& config_path,
            std::optional<std::uint64_t> seed_override,
            std::optional<std::string> output_override) {
  auto cfg = decsum::load_experiment_config(config_path, seed_override,
                                            output_override);
  auto diagnostics = decsum::validate(cfg);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) std::cerr << "config error: " << d << "\n";
    return 2;
  }
  auto manifest = decsum::run(cfg);
  if (manifest.failed) {
    std::cerr << "run failed: " << manifest.failure << "\n";
    return 1;
  }
  std::cout << "run complete: " << manifest.artifacts.size()
            << " artifacts under " << cfg.output_dir << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  auto cfg = decsum::load_experiment_config(config_path);
  auto diagnostics = decsum::validate(cfg);
  if (diagnostics.empty()) {
    std::cout << "config ok\n";
    return 0;
  }
  for (const auto& d : diagnostics) std::cout << d << "\n";
  return 1;
}

int cmd_train(const std::string& corpus_dir, const std::string& model,
              int topics, int iterations, int burn_in, int interval,
              std::uint64_t seed, const std::string& stopwords,
              const std::string& out_path) {
  decsum::PreprocessConfig pre;
  pre.stopwords_path = stopwords;
  auto corpus = decsum::load_corpus(corpus_dir, pre);

  decsum::ModelConfig mc;
  mc.kind = decsum::model_kind_from_string(model);
  mc.num_topics = topics;
  mc.iterations = iterations;
  mc.burn_in = burn_in;
  mc.sample_interval = interval;
  mc.seed = seed;

  auto posterior = decsum::train(corpus, mc);
  decsum::save_posterior(posterior, out_path);
  std::cout << "posterior written to " << out_path << "\n";
  return 0;
}

int cmd_score(const std::string& system_path, const std::string& reference_path,
              bool no_stem, bool keep_stopwords, const std::string& stopwords,
              const std::string& out_path) {
  decsum::RougeConfig config;
  config.stem = !no_stem;
  config.remove_stopwords = !keep_stopwords;

  std::unordered_set<std::string> stops;
  if (!stopwords.empty()) {
    std::ifstream in(stopwords);
    if (!in) {
      std::cerr << "cannot open stopword list: " << stopwords << "\n";
      return 2;
    }
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
      if (!line.empty() && line[0] != '#') stops.insert(line);
    }
  }

  decsum::PreprocessConfig pre;
  auto read_jsonl = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<json> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json rec = json::parse(line, nullptr, false);
      if (rec.is_discarded())
        throw std::runtime_error("malformed record at " + path + ":" +
                                 std::to_string(lineno));
      records.push_back(std::move(rec));
    }
    return records;
  };

  std::map<std::string, std::vector<std::string>> references;
  for (const auto& rec : read_jsonl(reference_path)) {
    std::string id = rec.at("decision_id").get<std::string>();
    if (rec.contains("abstract"))
      references[id] =
          decsum::tokenize_normalize(rec["abstract"].get<std::string>(), pre);
    else if (rec.contains("tokens"))
      references[id] = rec["tokens"].get<std::vector<std::string>>();
    else
      throw std::runtime_error("reference record for " + id +
                               " needs 'abstract' or 'tokens'");
  }

  std::vector<decsum::DecisionRouge> rows;
  for (const auto& rec : read_jsonl(system_path)) {
    std::string id = rec.at("decision_id").get<std::string>();
    std::vector<std::string> tokens;
    if (rec.contains("tokens"))
      tokens = rec["tokens"].get<std::vector<std::string>>();
    else if (rec.contains("text"))
      tokens = decsum::tokenize_normalize(rec["text"].get<std::string>(), pre);
    else
      throw std::runtime_error("system record for " + id +
                               " needs 'tokens' or 'text'");
    auto ref_it = references.find(id);
    if (ref_it == references.end())
      throw std::runtime_error("no reference for decision " + id);

    auto sys_pp = decsum::preprocess_for_rouge(tokens, config, stops);
    auto ref_pp = decsum::preprocess_for_rouge(ref_it->second, config, stops);
    decsum::DecisionRouge row;
    row.decision_id = id;
    for (auto v : config.variants)
      row.scores[v] = decsum::score_variant(v, sys_pp, ref_pp, config);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    std::cerr << "no system summaries to score\n";
    return 2;
  }
  auto report = decsum::aggregate(rows);
  std::string csv = decsum::report_to_csv(report);
  if (out_path.empty() || out_path == "-")
    std::cout << csv;
  else {
    decsum::write_text_file(out_path, csv);
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision summarization pipeline"};
  app.require_subcommand(1);

  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "error|warn|info|debug")
      ->default_val("warn");

  // run
  auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_output;
  run_cmd->add_option("--config", run_config, "experiment JSON")->required();
  run_cmd->add_option("--seed", run_seed, "seed override");
  run_cmd->add_option("--output-dir", run_output, "output directory override");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "check an experiment config");
  std::string val_config;
  val_cmd->add_option("--config", val_config, "experiment JSON")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "train one topic model");
  std::string tr_corpus, tr_model = "local_lda", tr_stopwords, tr_out;
  int tr_topics = 5, tr_iterations = 1000, tr_burn_in = 500, tr_interval = 10;
  std::uint64_t tr_seed = 1;
  train_cmd->add_option("--corpus", tr_corpus, "corpus directory")->required();
  train_cmd->add_option("--model", tr_model, "lda|local_lda|mglda|stm");
  train_cmd->add_option("--topics", tr_topics, "topic count");
  train_cmd->add_option("--iterations", tr_iterations, "Gibbs sweeps");
  train_cmd->add_option("--burn-in", tr_burn_in, "burn-in sweeps");
  train_cmd->add_option("--sample-interval", tr_interval, "snapshot spacing");
  train_cmd->add_option("--seed", tr_seed, "RNG seed");
  train_cmd->add_option("--stopwords", tr_stopwords, "stopword list");
  train_cmd->add_option("--out", tr_out, "posterior output path")->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "ROUGE-score summary files");
  std::string sc_system, sc_reference, sc_stopwords, sc_out;
  bool sc_no_stem = false, sc_keep_stopwords = false;
  score_cmd->add_option("--system", sc_system, "system summaries JSONL")
      ->required();
  score_cmd->add_option("--reference", sc_reference, "references JSONL")
      ->required();
  score_cmd->add_option("--stopwords", sc_stopwords, "stopword list");
  score_cmd->add_flag("--no-stem", sc_no_stem, "disable stemming");
  score_cmd->add_flag("--keep-stopwords", sc_keep_stopwords,
                      "disable stopword removal");
  score_cmd->add_option("--out", sc_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (!decsum::set_log_level(log_level)) {
    std::cerr << "unknown log level: " << log_level << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_config, run_seed, run_output);
    if (val_cmd->parsed()) return cmd_validate(val_config);
    if (train_cmd->parsed())
      return cmd_train(tr_corpus, tr_model, tr_topics, tr_iterations,
                       tr_burn_in, tr_interval, tr_seed, tr_stopwords, tr_out);
    if (score_cmd->parsed())
      return cmd_score(sc_system, sc_reference, sc_no_stem, sc_keep_stopwords,
                       sc_stopwords, sc_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
