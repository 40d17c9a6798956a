// Copyright 2026 The gecaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gecaug/reference.h"

#include <atomic>
#include <string>

#include "gecaug/align.h"
#include "gecaug/error.h"

namespace gecaug::reference {

PatternPool BuildPool(std::span<const ParallelExample> corpus, int n) {
  PatternPool pool(n);
  for (const ParallelExample& pair : corpus) {
    for (const ErrorPattern& p : PatternsOf(pair, n)) pool.Add(p);
  }
  return pool;
}

SynthesisResult Synthesize(const PatternPool& pool, const Generator& backend,
                           const SynthesisConfig& config) {
  if (config.count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  }
  if (!(config.error_rate >= 0.0 && config.error_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "error rate must be in [0, 1]");
  }
  if (pool.empty()) throw Error(ErrorCode::kEmptyPool, "pool is empty");
  const PatternSampler sampler(pool, /*sendable_only=*/true);
  const std::size_t budget = internal::AttemptBudget(config);
  const std::size_t slot_cap =
      budget >= config.count ? budget - config.count + 1 : 1;
  std::atomic<std::size_t> attempts_used{0};

  SynthesisResult result;
  for (std::size_t slot = 0; slot < config.count; ++slot) {
    internal::SlotOutcome o = internal::SynthesizeSlot(
        slot, sampler, backend, config, budget, slot_cap, attempts_used);
    result.stats.Merge(o.stats);
    if (!o.sample) {
      throw Error(ErrorCode::kRetryBudgetExhausted,
                  "retry budget of " + std::to_string(budget) +
                      " attempts exhausted at slot " + std::to_string(slot));
    }
    result.samples.push_back(std::move(*o.sample));
  }
  return result;
}

std::vector<ParallelExample> Relabel(std::span<const ParallelExample> corpus,
                                     const Corrector& corrector) {
  RelabelOptions options;
  options.workers = 1;
  options.checkpoint_every = corpus.size() + 1;
  return gecaug::Relabel(corpus, corrector, options);
}

ScoreReport Score(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold, double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  }
  internal::CheckAligned(hypothesis, gold);
  std::vector<internal::SentenceScore> sentences;
  sentences.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    sentences.push_back(internal::ScoreSentence(hypothesis[i], gold[i], beta));
  }
  return internal::Finish(sentences, beta);
}

double ErrorRate(std::span<const ParallelExample> corpus) {
  if (corpus.empty()) return 0.0;
  std::size_t errorful = 0;
  for (const ParallelExample& pair : corpus) {
    if (!ExtractEdits(pair.source, pair.target).empty()) ++errorful;
  }
  return static_cast<double>(errorful) / static_cast<double>(corpus.size());
}

}  // namespace gecaug::reference
