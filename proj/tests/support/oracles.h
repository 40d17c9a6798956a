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

#ifndef GECAUG_TESTS_SUPPORT_ORACLES_H_
#define GECAUG_TESTS_SUPPORT_ORACLES_H_

// Test-side oracles. None of these call into the code they check.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/denoise.h"
#include "gecaug/pattern.h"
#include "gecaug/synth.h"
#include "gecaug/tokens.h"

namespace gecaug::testing {

std::filesystem::path DataPath(const std::string& name);

// Fresh empty directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& name);

// Cost of the cheapest alignment, found by trying every operation sequence
// (no memoization). Costs in plain units: match 0, insert/delete 1,
// substitution 1 / 1.5 / 2, transposition of k tokens k - 0.5. ASCII only.
double BruteForceAlignmentCost(const Tokens& source, const Tokens& target);

// Uniform random sequences over a vocabulary of `vocab` short words.
std::vector<ParallelExample> FuzzPairs(std::size_t count, int vocab,
                                       int min_len, int max_len,
                                       std::uint64_t seed);

// Corrector that puts the planted correct sides back, using only the
// planted spans recorded on each sample.
class PlantedOracleCorrector : public Corrector {
 public:
  explicit PlantedOracleCorrector(std::span<const SyntheticSample> samples);
  CorrectionResult Correct(const std::string& id,
                           const std::string& text) const override;
  std::string id() const override { return "oracle"; }

 private:
  std::map<std::string, SyntheticSample> by_id_;
};

// Upper-tail p-value of Pearson's statistic.
double ChiSquarePValue(std::span<const double> observed,
                       std::span<const double> expected);

// `size` distinct n=1 substitution patterns with count ~ scale / rank^s.
PatternPool ZipfPool(std::size_t size, double s, double scale);

}  // namespace gecaug::testing

#endif  // GECAUG_TESTS_SUPPORT_ORACLES_H_
