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

#ifndef GECAUG_SYNTH_H_
#define GECAUG_SYNTH_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/genbackend.h"
#include "gecaug/pattern.h"
#include "json.hpp"

namespace gecaug {

// A pattern's correct side located in a generated sentence.
struct PatternMatch {
  ErrorPattern pattern;
  Span span;

  bool operator==(const PatternMatch&) const = default;
};

struct MatchResult {
  std::vector<PatternMatch> matched;  // sorted by span start
  std::vector<ErrorPattern> unmatched;
};

// Finds each pattern's correct side as a contiguous, case-sensitive token
// run. Occurrences are taken leftmost-first; an occurrence overlapping an
// already accepted one is skipped, and a pattern with no usable occurrence
// is reported unmatched.
MatchResult MatchPatterns(const Tokens& sentence,
                          std::span<const ErrorPattern> patterns);

// A pattern whose wrong side was written into the source at `span`.
struct PlantedPattern {
  ErrorPattern pattern;
  Span span;

  bool operator==(const PlantedPattern&) const = default;
};

struct SyntheticSample {
  std::string id;
  Tokens target;  // the generated sentence
  Tokens source;  // after substitution; equals target when nothing planted
  std::vector<PlantedPattern> planted;
  std::vector<ErrorPattern> requested;
  std::string generator_id;

  ParallelExample AsPair() const;

  bool operator==(const SyntheticSample&) const = default;
};

// Replaces every match's correct side by its wrong side.
SyntheticSample ApplySubstitution(const Tokens& sentence,
                                  std::span<const PatternMatch> matches);

// One Bernoulli(error_rate) draw decides whether all matches are planted
// or the sentence is kept as a correct pair.
SyntheticSample Substitute(const Tokens& sentence,
                           std::span<const PatternMatch> matches, Rng& rng,
                           double error_rate);

// Writes the planted patterns' correct sides back into the source.
Tokens RestoreTarget(const SyntheticSample& sample);

struct SynthesisConfig {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double error_rate = 0.5;
  // Total generation attempts allowed; defaults to 3 * count.
  std::optional<std::size_t> max_attempts;
  int workers = 1;
  std::string id_prefix = "syn";
};

// Integer tallies; Merge is associative and commutative.
struct SynthesisStats {
  std::uint64_t samples = 0;
  std::uint64_t attempts = 0;
  std::uint64_t generation_ok = 0;
  std::uint64_t refused = 0;
  std::uint64_t transport_error = 0;
  std::uint64_t no_match = 0;
  std::uint64_t requested_patterns = 0;
  std::uint64_t matched_patterns = 0;
  std::uint64_t unmatched_patterns = 0;
  std::uint64_t planted_patterns = 0;
  std::uint64_t errorful_samples = 0;

  void Merge(const SynthesisStats& other);
  // Unmatched share of the patterns requested in successful generations.
  double unmatched_rate() const;
  double errorful_fraction() const;
  nlohmann::ordered_json ToJson() const;

  bool operator==(const SynthesisStats&) const = default;
};

struct SynthesisResult {
  std::vector<SyntheticSample> samples;  // ordered by slot
  SynthesisStats stats;
};

// Runs sample -> assemble -> generate -> match -> substitute for `count`
// slots. Slot i draws from Rng::ForStream(seed, i), so the output does not
// depend on the worker count. Throws kRetryBudgetExhausted when the
// attempts needed exceed the budget.
SynthesisResult Synthesize(const PatternPool& pool, const Generator& backend,
                           const SynthesisConfig& config);

namespace internal {

struct SlotOutcome {
  std::optional<SyntheticSample> sample;
  SynthesisStats stats;
};

// One slot of Synthesize. `attempts_used` is shared by all slots; the slot
// gives up once it passes `budget` or after `slot_cap` own attempts.
SlotOutcome SynthesizeSlot(std::size_t slot, const PatternSampler& sampler,
                           const Generator& backend,
                           const SynthesisConfig& config, std::size_t budget,
                           std::size_t slot_cap,
                           std::atomic<std::size_t>& attempts_used);

std::size_t AttemptBudget(const SynthesisConfig& config);

}  // namespace internal

// Synthetic JSONL: id, source, target, planted [{wrong, correct, span}],
// requested [{wrong, correct}], generator, n. Readable as a plain corpus.
std::string ToJsonlLine(const SyntheticSample& sample);
void WriteSyntheticJsonl(std::span<const SyntheticSample> samples,
                         const std::filesystem::path& path);
std::vector<SyntheticSample> ParseSyntheticJsonl(std::istream& in);
std::vector<SyntheticSample> ReadSyntheticJsonl(const std::filesystem::path& path);

}  // namespace gecaug

#endif  // GECAUG_SYNTH_H_
