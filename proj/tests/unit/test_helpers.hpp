#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "decsum/corpus.hpp"
#include "decsum/util.hpp"

namespace decsum::test {

// scratch directory removed on destruction
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("decsum_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline std::string source_dir() { return DECSUM_SOURCE_DIR; }
inline std::string toy_corpus_dir() { return source_dir() + "/data/toy"; }
inline std::string stopwords_path() {
  return source_dir() + "/data/stopwords.txt";
}

inline Corpus load_toy_corpus() {
  PreprocessConfig config;
  config.stopwords_path = stopwords_path();
  return load_corpus(toy_corpus_dir(), config);
}

// hand-built corpus for small fixtures: one meeting per vector of DA texts
inline Corpus make_corpus(
    const std::vector<std::vector<std::string>>& meeting_texts) {
  Corpus corpus;
  for (std::size_t mi = 0; mi < meeting_texts.size(); ++mi) {
    Meeting meeting;
    meeting.meeting_id = "M" + std::to_string(mi);
    for (std::size_t di = 0; di < meeting_texts[mi].size(); ++di) {
      DialogueAct da;
      da.meeting_id = meeting.meeting_id;
      da.da_index = int(di);
      da.raw_text = meeting_texts[mi][di];
      for (const auto& tok : tokenize_normalize(da.raw_text, corpus.config))
        da.tokens.push_back(corpus.vocabulary.add(tok));
      meeting.das.push_back(std::move(da));
    }
    corpus.meetings.push_back(std::move(meeting));
  }
  return corpus;
}

}  // namespace decsum::test
