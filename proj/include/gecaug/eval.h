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

#ifndef GECAUG_EVAL_H_
#define GECAUG_EVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/pattern.h"
#include "json.hpp"

namespace gecaug {

inline constexpr double kDefaultBeta = 0.5;

// Hypothesis edits that match no gold edit have no gold type; they are
// tallied under this category.
inline constexpr char kUntypedCategory[] = "UNTYPED";

struct EditCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  EditCounts& operator+=(const EditCounts& other);
  bool operator==(const EditCounts&) const = default;
};

double Precision(const EditCounts& c);
double Recall(const EditCounts& c);

// (1 + b^2) P R / (b^2 P + R), 0 when the denominator is 0. Throws
// kInvalidArgument on negative counts or beta <= 0.
double FBeta(std::int64_t tp, std::int64_t fp, std::int64_t fn,
             double beta = kDefaultBeta);
double FBeta(const EditCounts& c, double beta = kDefaultBeta);
double FBetaFromPR(double precision, double recall, double beta = kDefaultBeta);

struct CategoryScore {
  EditCounts counts;
  double f_beta = 0.0;
};

struct ScoreReport {
  std::uint64_t sentences = 0;
  EditCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = kDefaultBeta;
  std::map<std::string, CategoryScore> per_category;

  nlohmann::ordered_json ToJson() const;
};

// Exact (span, replacement) matching of hypothesis edits against gold.
// Per sentence the annotator with the highest F wins; ties prefer more true
// positives, then fewer errors, then the lower annotator id. Throws
// kSourceMismatch when the streams disagree in length or source text.
ScoreReport Score(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold,
                  double beta = kDefaultBeta, int workers = 1);

std::string FormatScoreReport(const ScoreReport& report);

// Fraction of pairs with at least one edit.
double ErrorRate(std::span<const ParallelExample> corpus, int workers = 1);

struct DistributionReport {
  std::size_t top_k = 0;
  std::vector<ErrorPattern> patterns;
  std::vector<std::uint64_t> reference_freqs;
  std::vector<std::uint64_t> candidate_freqs;
  double cosine = 0.0;
  double spearman = 0.0;

  nlohmann::ordered_json ToJson() const;
  // rank,wrong,correct,reference,candidate
  std::string ToCsv() const;
};

double Cosine(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
// Pearson correlation of average ranks.
double Spearman(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::vector<double> AverageRanks(std::span<const std::uint64_t> values);

// Projects both pools onto the reference's `top_k` most frequent patterns.
// Throws kEmptyPool for an empty reference, kInvalidArgument for top_k < 1.
DistributionReport DistributionConsistency(const PatternPool& reference,
                                           const PatternPool& candidate,
                                           std::size_t top_k = 100);
// Builds the candidate pool from `corpus` at the reference's width.
DistributionReport DistributionConsistency(
    const PatternPool& reference, std::span<const ParallelExample> corpus,
    std::size_t top_k = 100, int workers = 1);

namespace internal {

struct SentenceScore {
  EditCounts counts;
  std::vector<std::pair<std::string, EditCounts>> categories;
};

// Best-annotator counts for one sentence.
SentenceScore ScoreSentence(const ParallelExample& hypothesis,
                            const AnnotatedExample& gold, double beta);

// Checks lengths and sources; throws kSourceMismatch.
void CheckAligned(std::span<const ParallelExample> hypothesis,
                  std::span<const AnnotatedExample> gold);

ScoreReport Finish(std::span<const SentenceScore> sentences, double beta);

}  // namespace internal

}  // namespace gecaug

#endif  // GECAUG_EVAL_H_
