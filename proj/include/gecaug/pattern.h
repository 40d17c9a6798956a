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

#ifndef GECAUG_PATTERN_H_
#define GECAUG_PATTERN_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gecaug/align.h"
#include "gecaug/corpus.h"
#include "gecaug/rng.h"
#include "gecaug/tokens.h"

namespace gecaug {

// A (wrong, correct) token-sequence pair. For n > 1 both sides carry the
// same up-to-(n-1)/2 tokens of context on each side of the raw edit.
struct ErrorPattern {
  Tokens wrong;
  Tokens correct;
  int n = 1;

  // Only patterns with a non-empty correct side can anchor generation.
  bool sendable() const { return !correct.empty(); }

  auto operator<=>(const ErrorPattern&) const = default;
  bool operator==(const ErrorPattern&) const = default;
};

// Widens `edit` with shared context. Context never crosses another edit in
// `sentence_edits` and is silently truncated at sentence boundaries.
// Throws kInvalidArgument unless n is odd and >= 1.
ErrorPattern ExtendToNgram(const Edit& edit,
                           std::span<const Edit> sentence_edits,
                           const Tokens& source, const Tokens& target, int n);
ErrorPattern ExtendToNgram(const Edit& edit, const Tokens& source,
                           const Tokens& target, int n);

// All patterns of one pair at width n, in edit order.
std::vector<ErrorPattern> PatternsOf(const ParallelExample& pair, int n);

class PatternPool {
 public:
  explicit PatternPool(int n = 1);

  void Add(const ErrorPattern& pattern, std::uint64_t count = 1);
  void AddProvenance(std::string corpus_id);

  int n() const { return n_; }
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  std::uint64_t count(const ErrorPattern& pattern) const;
  const std::map<ErrorPattern, std::uint64_t>& counts() const { return counts_; }
  const std::vector<std::string>& provenance() const { return provenance_; }

  // The k most frequent patterns; ties broken lexicographically.
  std::vector<std::pair<ErrorPattern, std::uint64_t>> TopK(std::size_t k) const;

  bool operator==(const PatternPool&) const = default;

 private:
  int n_;
  std::uint64_t total_ = 0;
  std::map<ErrorPattern, std::uint64_t> counts_;
  std::vector<std::string> provenance_;
};

// Counts every edit of every pair, extended to n. `workers` threads each
// fill a partial pool over a contiguous shard; partials are then merged.
PatternPool BuildPool(std::span<const ParallelExample> corpus, int n,
                      std::string corpus_id = "", int workers = 1);

// Pointwise sum. Throws kMixedWidth when widths disagree.
PatternPool MergePools(std::span<const PatternPool> pools);

// Pool JSONL: one {"wrong": [...], "correct": [...], "count": c, "n": n}
// object per line, most frequent first.
void WritePool(const PatternPool& pool, std::ostream& out);
void WritePool(const PatternPool& pool, const std::filesystem::path& path);
PatternPool ParsePool(std::istream& in, int default_n = 1);
PatternPool ReadPool(const std::filesystem::path& path, int default_n = 1);

// True when the token sequences overlap as strings: one contains the other,
// or a suffix of one is a prefix of the other.
bool CorrectSidesOverlap(const Tokens& a, const Tokens& b);

// Frequency-proportional sampling with replacement.
class PatternSampler {
 public:
  // With sendable_only, patterns with an empty correct side are excluded
  // from the distribution. Throws kEmptyPool if nothing remains.
  explicit PatternSampler(const PatternPool& pool, bool sendable_only = false);

  const ErrorPattern& SampleOne(Rng& rng) const;

  // One or two patterns (uniform). Overlapping pairs are redrawn up to
  // kMaxOverlapRetries times, then the draw is truncated to one pattern.
  std::vector<ErrorPattern> Sample(Rng& rng) const;

  std::size_t support() const { return patterns_.size(); }
  std::uint64_t total() const { return cumulative_.empty() ? 0 : cumulative_.back(); }

  static constexpr int kMaxOverlapRetries = 8;

 private:
  std::vector<ErrorPattern> patterns_;
  std::vector<std::uint64_t> cumulative_;
};

std::vector<ErrorPattern> SamplePatterns(const PatternPool& pool, Rng& rng);

}  // namespace gecaug

#endif  // GECAUG_PATTERN_H_
