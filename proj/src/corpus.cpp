#include "decsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "decsum/util.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace decsum {

TokenId Vocabulary::add(const std::string& token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  TokenId id = TokenId(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

std::optional<TokenId> Vocabulary::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  return tokens_.at(std::size_t(id));
}

const DialogueAct& Corpus::da(DaRef ref) const {
  return meetings.at(std::size_t(ref.meeting)).das.at(std::size_t(ref.da));
}

const Decision* Corpus::find_decision(const std::string& id) const {
  for (const auto& d : decisions)
    if (d.decision_id == id) return &d;
  return nullptr;
}

std::vector<const Decision*> Corpus::decisions_of_meeting(int meeting) const {
  std::vector<const Decision*> out;
  const auto& mid = meetings.at(std::size_t(meeting)).meeting_id;
  for (const auto& d : decisions)
    if (d.meeting_id == mid) out.push_back(&d);
  return out;
}

std::size_t Corpus::total_das() const {
  std::size_t n = 0;
  for (const auto& m : meetings) n += m.das.size();
  return n;
}

std::size_t Corpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& m : meetings)
    for (const auto& da : m.das) n += da.tokens.size();
  return n;
}

std::uint64_t Corpus::vocabulary_fingerprint() const {
  std::string joined;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    joined += vocabulary.token(TokenId(i));
    joined += '\n';
  }
  return fnv1a64(joined);
}

std::string Corpus::da_name(DaRef ref) const {
  return meetings.at(std::size_t(ref.meeting)).meeting_id + ":" +
         std::to_string(ref.da);
}

std::vector<std::string> tokenize_normalize(const std::string& text,
                                            const PreprocessConfig& config) {
  std::string cleaned;
  cleaned.reserve(text.size());
  if (config.strip_bracket_markers) {
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == '[') {
        std::size_t close = text.find(']', i + 1);
        if (close != std::string::npos) {
          i = close + 1;
          continue;
        }
      }
      cleaned.push_back(text[i]);
      ++i;
    }
  } else {
    cleaned = text;
  }

  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : cleaned) {
    if (std::isalnum(c)) {
      current.push_back(char(std::tolower(c)));
    } else if (c >= 0x80) {
      current.push_back(char(c));  // keep UTF-8 continuation/lead bytes intact
    } else {
      flush();
    }
  }
  flush();
  return out;
}

namespace {

[[noreturn]] void record_error(const std::string& file, int line,
                               const std::string& what) {
  throw std::runtime_error("malformed record at " + file + ":" +
                           std::to_string(line) + ": " + what);
}

json parse_line(const std::string& file, int line, const std::string& text) {
  json rec = json::parse(text, nullptr, false);
  if (rec.is_discarded() || !rec.is_object())
    record_error(file, line, "not a JSON object");
  return rec;
}

std::string require_string(const json& rec, const char* field,
                           const std::string& file, int line) {
  if (!rec.contains(field) || !rec[field].is_string())
    record_error(file, line, std::string("missing string field '") + field + "'");
  return rec[field].get<std::string>();
}

struct RawDa {
  std::string meeting_id;
  int da_index;
  std::string speaker;
  std::string text;
  bool is_drda;
  std::vector<std::string> decision_ids;
};

}  // namespace

Corpus load_corpus(const std::string& dir, const PreprocessConfig& config) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("corpus directory not found: " + dir);

  std::vector<std::string> meeting_files;
  std::string decisions_file;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name == "decisions.jsonl")
      decisions_file = entry.path().string();
    else if (name.size() > 6 && name.ends_with(".jsonl"))
      meeting_files.push_back(entry.path().string());
  }
  std::sort(meeting_files.begin(), meeting_files.end());

  Corpus corpus;
  corpus.config = config;

  // decisions sidecar first so DA references can be resolved
  if (!decisions_file.empty()) {
    std::ifstream in(decisions_file);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json rec = parse_line(decisions_file, lineno, line);
      Decision d;
      d.decision_id = require_string(rec, "decision_id", decisions_file, lineno);
      d.meeting_id = require_string(rec, "meeting_id", decisions_file, lineno);
      d.abstract_text = require_string(rec, "abstract", decisions_file, lineno);
      d.abstract_tokens = tokenize_normalize(d.abstract_text, config);
      if (d.abstract_tokens.empty())
        record_error(decisions_file, lineno,
                     "abstract for " + d.decision_id + " empty after normalization");
      if (corpus.find_decision(d.decision_id))
        record_error(decisions_file, lineno, "duplicate decision id " + d.decision_id);
      corpus.decisions.push_back(std::move(d));
    }
  }

  std::vector<std::vector<RawDa>> raw_meetings;
  for (const auto& file : meeting_files) {
    std::ifstream in(file);
    std::string line;
    int lineno = 0;
    std::vector<RawDa> das;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json rec = parse_line(file, lineno, line);
      RawDa da;
      da.meeting_id = require_string(rec, "meeting_id", file, lineno);
      if (!rec.contains("da_index") || !rec["da_index"].is_number_integer())
        record_error(file, lineno, "missing integer field 'da_index'");
      da.da_index = rec["da_index"].get<int>();
      da.speaker = rec.value("speaker", "");
      da.text = require_string(rec, "text", file, lineno);
      da.is_drda = rec.value("is_drda", false);
      if (rec.contains("decision_ids")) {
        if (!rec["decision_ids"].is_array())
          record_error(file, lineno, "'decision_ids' must be an array");
        for (const auto& v : rec["decision_ids"]) {
          if (!v.is_string())
            record_error(file, lineno, "'decision_ids' entries must be strings");
          da.decision_ids.push_back(v.get<std::string>());
        }
      }
      std::sort(da.decision_ids.begin(), da.decision_ids.end());
      da.decision_ids.erase(
          std::unique(da.decision_ids.begin(), da.decision_ids.end()),
          da.decision_ids.end());
      if (!da.decision_ids.empty() && !da.is_drda)
        record_error(file, lineno, "decision_ids present but is_drda is false");
      if (!das.empty() && da.meeting_id != das.front().meeting_id)
        record_error(file, lineno, "mixed meeting ids within one file");
      if (da.da_index != int(das.size()))
        record_error(file, lineno, "da_index " + std::to_string(da.da_index) +
                                       " not contiguous (expected " +
                                       std::to_string(das.size()) + ")");
      das.push_back(std::move(da));
    }
    if (!das.empty()) raw_meetings.push_back(std::move(das));
  }

  // token counts over the whole corpus decide the (optional) frequency cutoff
  std::unordered_map<std::string, int> counts;
  std::vector<std::vector<std::vector<std::string>>> tokenized(raw_meetings.size());
  for (std::size_t mi = 0; mi < raw_meetings.size(); ++mi) {
    tokenized[mi].reserve(raw_meetings[mi].size());
    for (const auto& da : raw_meetings[mi]) {
      auto toks = tokenize_normalize(da.text, config);
      for (const auto& t : toks) counts[t]++;
      tokenized[mi].push_back(std::move(toks));
    }
  }

  for (std::size_t mi = 0; mi < raw_meetings.size(); ++mi) {
    Meeting meeting;
    meeting.meeting_id = raw_meetings[mi].front().meeting_id;
    for (std::size_t di = 0; di < raw_meetings[mi].size(); ++di) {
      auto& raw = raw_meetings[mi][di];
      DialogueAct da;
      da.meeting_id = raw.meeting_id;
      da.da_index = raw.da_index;
      da.speaker = std::move(raw.speaker);
      da.raw_text = std::move(raw.text);
      da.is_drda = raw.is_drda;
      da.decision_ids = std::move(raw.decision_ids);
      for (const auto& tok : tokenized[mi][di]) {
        if (counts[tok] < config.min_token_count) continue;
        da.tokens.push_back(corpus.vocabulary.add(tok));
      }
      for (const auto& id : da.decision_ids) {
        const Decision* dec = corpus.find_decision(id);
        if (!dec) throw std::runtime_error("unresolved decision id " + id);
        if (dec->meeting_id != da.meeting_id)
          throw std::runtime_error("decision " + id + " belongs to meeting " +
                                   dec->meeting_id + ", referenced from " +
                                   da.meeting_id);
      }
      meeting.das.push_back(std::move(da));
    }
    corpus.meetings.push_back(std::move(meeting));
  }

  if (!config.stopwords_path.empty()) {
    std::ifstream in(config.stopwords_path);
    if (!in)
      throw std::runtime_error("cannot open stopword list: " + config.stopwords_path);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      corpus.stopword_strings.insert(line);
      if (auto id = corpus.vocabulary.id_of(line)) corpus.stopword_ids.insert(*id);
    }
  }

  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& meeting : corpus.meetings) {
    std::ostringstream out;
    for (const auto& da : meeting.das) {
      json rec;
      rec["meeting_id"] = da.meeting_id;
      rec["da_index"] = da.da_index;
      rec["speaker"] = da.speaker;
      rec["text"] = da.raw_text;
      rec["is_drda"] = da.is_drda;
      rec["decision_ids"] = da.decision_ids;
      out << rec.dump() << "\n";
    }
    write_text_file((fs::path(dir) / (meeting.meeting_id + ".jsonl")).string(),
                    out.str());
  }
  std::ostringstream out;
  for (const auto& d : corpus.decisions) {
    json rec;
    rec["decision_id"] = d.decision_id;
    rec["meeting_id"] = d.meeting_id;
    rec["abstract"] = d.abstract_text;
    out << rec.dump() << "\n";
  }
  write_text_file((fs::path(dir) / "decisions.jsonl").string(), out.str());
}

std::map<std::string, DecisionCluster> true_clusters(const Corpus& corpus) {
  std::map<std::string, DecisionCluster> clusters;
  for (const auto& d : corpus.decisions) {
    DecisionCluster c;
    c.decision_id = d.decision_id;
    clusters.emplace(d.decision_id, std::move(c));
  }
  for (int mi = 0; mi < int(corpus.meetings.size()); ++mi) {
    const auto& meeting = corpus.meetings[std::size_t(mi)];
    for (const auto& da : meeting.das) {
      if (!da.is_drda) continue;
      for (const auto& id : da.decision_ids)
        clusters.at(id).center_das.push_back(DaRef{mi, da.da_index});
    }
  }
  for (auto& [id, cluster] : clusters) {
    if (cluster.center_das.empty())
      log_warn("decision " + id + " has no supporting DRDAs; cluster is empty");
  }
  return clusters;
}

}  // namespace decsum
