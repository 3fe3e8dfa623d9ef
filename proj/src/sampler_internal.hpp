#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "decsum/corpus.hpp"
#include "decsum/topic_models.hpp"

namespace decsum::internal {

std::unique_ptr<GibbsSampler> make_lda_sampler(const Corpus& corpus,
                                               const ModelConfig& config);
std::unique_ptr<GibbsSampler> make_mglda_sampler(const Corpus& corpus,
                                                 const ModelConfig& config);
std::unique_ptr<GibbsSampler> make_stm_sampler(const Corpus& corpus,
                                               const ModelConfig& config);

inline void audit_eq(long long got, long long want, const std::string& what) {
  if (got != want)
    throw std::logic_error("count audit failed: " + what + " (got " +
                           std::to_string(got) + ", want " +
                           std::to_string(want) + ")");
}

inline void audit_true(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("count audit failed: " + what);
}

}  // namespace decsum::internal
