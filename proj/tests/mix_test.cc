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

#include "gecaug/mix.h"

#include <gtest/gtest.h>

#include <fstream>
#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "gecaug/error.h"
#include "gecaug/hash.h"
#include "support/oracles.h"

namespace gecaug {
namespace {

std::vector<ParallelExample> MakeCorpus(std::size_t n, const std::string& tag,
                                        double errorful_every = 0.0) {
  std::vector<ParallelExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    ParallelExample ex;
    ex.id = std::to_string(i + 1);
    ex.target = {tag, std::to_string(i)};
    ex.source = ex.target;
    if (errorful_every > 0 && i % static_cast<std::size_t>(errorful_every) == 0) {
      ex.source.push_back("x");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::multiset<std::string> Digests(const std::vector<ParallelExample>& pairs,
                                   bool strip_origin) {
  std::multiset<std::string> out;
  for (auto p : pairs) {
    if (strip_origin) p.id = p.id.substr(p.id.find(':') + 1);
    out.insert(Sha256Hex(ToJsonlLine(p)));
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

TEST(MixTest, SizesAndManifestAtTableScale) {
  const std::vector<MixOrigin> origins = {
      {"wi_locness", MakeCorpus(34304, "r")},
      {kSyntheticOrigin, MakeCorpus(200000, "s")}};
  const MixResult r = MixCorpora(origins, 11, Stage::kIII);
  EXPECT_EQ(r.pairs.size(), 234304u);
  EXPECT_EQ(r.manifest.total, 234304u);
  ASSERT_EQ(r.manifest.origin_counts.size(), 2u);
  EXPECT_EQ(r.manifest.origin_counts[0].second, 34304u);
  EXPECT_EQ(r.manifest.origin_counts[1].second, 200000u);
  const auto j = r.manifest.ToJson();
  EXPECT_EQ(j["origins"]["wi_locness"], 34304);
  EXPECT_EQ(j["stage"], "III");
  EXPECT_EQ(j["seed"], 11);
}

TEST(MixTest, PreservesMultisetAndPrefixesIds) {
  const auto real = MakeCorpus(300, "r", 3);
  const auto syn = MakeCorpus(200, "s", 2);
  const std::vector<MixOrigin> origins = {{"real", real}, {"synthetic", syn}};
  const MixResult r = MixCorpora(origins, 5);
  auto expected = Digests(real, false);
  for (const auto& d : Digests(syn, false)) expected.insert(d);
  EXPECT_EQ(Digests(r.pairs, true), expected);
  for (const auto& p : r.pairs) {
    EXPECT_TRUE(p.id.starts_with("real:") || p.id.starts_with("synthetic:"));
  }
  EXPECT_EQ(r.manifest.errorful, 100u + 100u);
}

TEST(MixTest, SeedDeterminesOrder) {
  const std::vector<MixOrigin> origins = {{"real", MakeCorpus(500, "r")}};
  const auto a = MixCorpora(origins, 9);
  const auto b = MixCorpora(origins, 9);
  const auto c = MixCorpora(origins, 10);
  EXPECT_EQ(a.pairs, b.pairs);
  EXPECT_EQ(a.manifest.content_sha256, b.manifest.content_sha256);
  EXPECT_NE(a.pairs, c.pairs);
  EXPECT_NE(a.manifest.content_sha256, c.manifest.content_sha256);
}

TEST(MixTest, DuplicateOriginNames) {
  const std::vector<MixOrigin> origins = {{"a", MakeCorpus(2, "r")},
                                          {"a", MakeCorpus(2, "s")}};
  EXPECT_EQ(CodeOf([&] { MixCorpora(origins, 1); }), ErrorCode::kInvalidArgument);
}

TEST(ShuffleTest, MarkedElementPositionIsUniform) {
  constexpr int kSize = 100;
  constexpr int kTrials = 10000;
  std::vector<double> observed(kSize, 0.0);
  for (int t = 0; t < kTrials; ++t) {
    std::vector<int> items(kSize);
    for (int i = 0; i < kSize; ++i) items[i] = i;
    Rng rng(1000 + t);
    Shuffle(items, rng);
    observed[std::find(items.begin(), items.end(), 0) - items.begin()] += 1;
  }
  const std::vector<double> expected(kSize, double(kTrials) / kSize);
  EXPECT_GT(testing::ChiSquarePValue(observed, expected), 1e-3);
}

class PlanTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::ScratchDir("mixplan");
    WriteJsonl(MakeCorpus(120, "r", 4), dir_ / "real.jsonl");
    WriteJsonl(MakeCorpus(80, "s", 1), dir_ / "syn.jsonl");
  }

  std::filesystem::path WritePlan(const nlohmann::json& j) {
    const auto path = dir_ / "plan.json";
    std::ofstream(path) << j.dump();
    return path;
  }

  std::filesystem::path dir_;
};

TEST_F(PlanTest, ParsesAndResolvesRelativePaths) {
  const StagePlan plan = ReadStagePlan(WritePlan(
      {{"stage", "II"}, {"real_corpora", {"real.jsonl"}},
       {"synthetic_corpus", "syn.jsonl"}, {"synthetic_count", 50}, {"seed", 3}}));
  EXPECT_EQ(plan.stage, Stage::kII);
  EXPECT_EQ(plan.real_corpora[0], dir_ / "real.jsonl");
  EXPECT_EQ(*plan.synthetic_count, 50u);
  const MixResult r = Mix(plan);
  EXPECT_EQ(r.pairs.size(), 170u);
  EXPECT_EQ(r.manifest.origin_counts[0].first, "real");
  EXPECT_EQ(r.manifest.origin_counts[1].second, 50u);
  // The first 50 synthetic pairs are the ones taken.
  std::set<std::string> syn_ids;
  for (const auto& p : r.pairs) {
    if (p.id.starts_with("synthetic:")) syn_ids.insert(p.id);
  }
  EXPECT_TRUE(syn_ids.count("synthetic:50"));
  EXPECT_FALSE(syn_ids.count("synthetic:51"));
}

TEST_F(PlanTest, ValidationErrors) {
  EXPECT_EQ(CodeOf([&] {
              ReadStagePlan(WritePlan({{"stage", "I"},
                                       {"real_corpora", {"real.jsonl"}},
                                       {"synthetic_corpus", "syn.jsonl"},
                                       {"seed", 1}}));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] {
              ReadStagePlan(WritePlan({{"stage", "IV"}, {"seed", 1},
                                       {"real_corpora", {"real.jsonl"}}}));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] {
              ReadStagePlan(WritePlan({{"stage", "II"}, {"real_corpora", {"real.jsonl"}}}));
            }),
            ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([&] {
              ReadStagePlan(WritePlan({{"stage", "II"}, {"seed", 1}, {"extra", 1},
                                       {"real_corpora", {"real.jsonl"}}}));
            }),
            ErrorCode::kConfig);
  const StagePlan too_many = ReadStagePlan(WritePlan(
      {{"stage", "III"}, {"real_corpora", {"real.jsonl"}},
       {"synthetic_corpus", "syn.jsonl"}, {"synthetic_count", 81}, {"seed", 1}}));
  EXPECT_EQ(CodeOf([&] { Mix(too_many); }), ErrorCode::kInvalidArgument);
}

TEST_F(PlanTest, CapZeroIsShuffledRealCorpus) {
  StagePlan plan = ReadStagePlan(WritePlan(
      {{"stage", "II"}, {"real_corpora", {"real.jsonl"}},
       {"synthetic_corpus", "syn.jsonl"}, {"synthetic_count", 0}, {"seed", 3}}));
  const MixResult r = Mix(plan);
  EXPECT_EQ(r.pairs.size(), 120u);
  bool moved = false;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    moved |= r.pairs[i].id != "real:" + std::to_string(i + 1);
  }
  EXPECT_TRUE(moved);
}

TEST_F(PlanTest, RatioSweep) {
  const StagePlan plan = ReadStagePlan(WritePlan(
      {{"stage", "III"}, {"real_corpora", {"real.jsonl"}},
       {"synthetic_corpus", "syn.jsonl"}, {"seed", 4}}));
  const std::vector<std::size_t> caps = {0, 20, 40, 80};
  const auto entries = RatioSweep(plan, caps, dir_ / "sweep");
  ASSERT_EQ(entries.size(), 4u);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(entries[i].manifest.total, 120 + caps[i]);
    EXPECT_TRUE(std::filesystem::exists(entries[i].output));
    EXPECT_EQ(ReadJsonl(entries[i].output).size(), 120 + caps[i]);
    if (i) {
      EXPECT_GT(entries[i].manifest.total, entries[i - 1].manifest.total);
    }
    // Real corpus: 30 of 120 errorful; synthetic: all errorful.
    const double weighted = (30.0 + caps[i]) / (120.0 + caps[i]);
    EXPECT_DOUBLE_EQ(entries[i].manifest.errorful_fraction(), weighted);
  }
  std::ifstream summary(dir_ / "sweep" / "sweep.tsv");
  std::string line;
  int lines = 0;
  while (std::getline(summary, line)) ++lines;
  EXPECT_EQ(lines, 5);

  const std::vector<std::size_t> dup = {0, 20, 20};
  EXPECT_EQ(CodeOf([&] { RatioSweep(plan, dup, dir_ / "dup"); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace gecaug
