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

#ifndef GECAUG_MIX_H_
#define GECAUG_MIX_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gecaug/corpus.h"
#include "gecaug/rng.h"
#include "json.hpp"

namespace gecaug {

enum class Stage { kI, kII, kIII };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);

// Plan JSON:
//   {"stage": "II", "real_corpora": ["a.tsv", ...],
//    "synthetic_corpus": "syn.jsonl", "synthetic_count": 200000, "seed": 7}
// Relative paths resolve against the directory of the plan file.
struct StagePlan {
  Stage stage = Stage::kII;
  std::vector<std::filesystem::path> real_corpora;
  std::optional<std::filesystem::path> synthetic_corpus;
  std::optional<std::size_t> synthetic_count;
  std::uint64_t seed = 0;

  // Throws kConfig for stage I with synthetic data and for a cap without
  // a synthetic corpus.
  void Validate() const;
  nlohmann::ordered_json ToJson() const;
};

StagePlan ParseStagePlan(const nlohmann::json& j,
                         const std::filesystem::path& base_dir = {});
StagePlan ReadStagePlan(const std::filesystem::path& path);

inline constexpr char kSyntheticOrigin[] = "synthetic";

struct MixOrigin {
  std::string name;
  std::vector<ParallelExample> pairs;
};

struct MixManifest {
  Stage stage = Stage::kII;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> origin_counts;
  std::uint64_t total = 0;
  std::uint64_t errorful = 0;
  std::string content_sha256;

  double errorful_fraction() const;
  nlohmann::ordered_json ToJson() const;
};

struct MixResult {
  std::vector<ParallelExample> pairs;
  MixManifest manifest;
};

// Fisher-Yates.
template <typename T>
void Shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.Below(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Concatenates the origins in order, prefixes ids with "<origin>:" and
// shuffles with `seed`. Origin names must be distinct.
MixResult MixCorpora(std::span<const MixOrigin> origins, std::uint64_t seed,
                     Stage stage = Stage::kII);

// Reads the plan's corpora and mixes them. The synthetic corpus contributes
// its first `synthetic_count` pairs (all of them when unset). Throws
// kInvalidArgument when the cap exceeds the synthetic corpus.
MixResult Mix(const StagePlan& plan);

struct SweepEntry {
  std::size_t cap = 0;
  std::filesystem::path output;
  MixManifest manifest;
};

// One mixed corpus per cap, written as `mix-<cap>.jsonl` (+ manifest) in
// `out_dir`, plus `sweep.tsv`. Caps must be distinct.
std::vector<SweepEntry> RatioSweep(const StagePlan& plan,
                                   std::span<const std::size_t> caps,
                                   const std::filesystem::path& out_dir);

}  // namespace gecaug

#endif  // GECAUG_MIX_H_
