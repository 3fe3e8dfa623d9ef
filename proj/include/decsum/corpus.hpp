#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace decsum {

using TokenId = std::int32_t;

struct PreprocessConfig {
  bool strip_bracket_markers = true;  // drop "[vocalsound]" style annotations
  int min_token_count = 1;            // vocabulary frequency cutoff; 1 keeps everything
  std::string stopwords_path;         // plain text, one token per line; empty = none
};

struct DialogueAct {
  std::string meeting_id;
  int da_index = 0;
  std::string speaker;
  std::string raw_text;
  std::vector<TokenId> tokens;
  bool is_drda = false;
  std::vector<std::string> decision_ids;  // sorted, unique; nonempty implies is_drda
};

struct Decision {
  std::string decision_id;
  std::string meeting_id;
  std::string abstract_text;
  std::vector<std::string> abstract_tokens;  // normalized strings
};

struct Meeting {
  std::string meeting_id;
  std::vector<DialogueAct> das;  // da_index == position
};

// (meeting position in corpus, da_index within meeting)
struct DaRef {
  int meeting = 0;
  int da = 0;
  auto operator<=>(const DaRef&) const = default;
};

class Vocabulary {
 public:
  TokenId add(const std::string& token);
  std::optional<TokenId> id_of(const std::string& token) const;
  const std::string& token(TokenId id) const;
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

struct Corpus {
  std::vector<Meeting> meetings;
  std::vector<Decision> decisions;  // file order
  Vocabulary vocabulary;
  std::unordered_set<TokenId> stopword_ids;
  std::unordered_set<std::string> stopword_strings;
  PreprocessConfig config;

  const DialogueAct& da(DaRef ref) const;
  const Decision* find_decision(const std::string& id) const;
  std::vector<const Decision*> decisions_of_meeting(int meeting) const;
  std::size_t total_das() const;
  std::size_t total_tokens() const;
  bool is_stopword(TokenId id) const { return stopword_ids.count(id) > 0; }
  std::uint64_t vocabulary_fingerprint() const;
  std::string da_name(DaRef ref) const;  // "M01:3" for error messages
};

// Lowercase, strip bracketed annotation markers, split on anything that is
// not a letter or digit (so contractions split at the apostrophe).
std::vector<std::string> tokenize_normalize(const std::string& text,
                                            const PreprocessConfig& config = {});

// Directory of per-meeting JSON-lines files plus a decisions.jsonl sidecar.
Corpus load_corpus(const std::string& dir, const PreprocessConfig& config = {});

// Re-emit a corpus in the load_corpus directory format.
void save_corpus(const Corpus& corpus, const std::string& dir);

enum class WordMode { kOne, kMulti };  // context DA word selection rule

struct DecisionCluster {
  std::string decision_id;
  std::vector<DaRef> center_das;                     // temporal order
  std::vector<std::pair<DaRef, DaRef>> context_das;  // (context DA, its center DA)
  WordMode word_mode = WordMode::kOne;
};

// Gold partitioning: every decision maps to the DRDAs that support it.
std::map<std::string, DecisionCluster> true_clusters(const Corpus& corpus);

}  // namespace decsum
