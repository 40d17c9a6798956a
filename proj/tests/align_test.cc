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

#include "gecaug/align.h"

#include <gtest/gtest.h>

#include "gecaug/error.h"
#include "gecaug/rng.h"
#include "support/oracles.h"

namespace gecaug {
namespace {

TEST(AlignTest, SingleTokenInsertion) {
  const Tokens src = SplitTokens(
      "Public transport enables our body to move one place to another .");
  const Tokens tgt = SplitTokens(
      "Public transport enables our body to move from one place to another .");
  const auto edits = ExtractEdits(src, tgt);
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].src, (Span{7, 7}));
  EXPECT_EQ(edits[0].replacement, (Tokens{"from"}));
  EXPECT_EQ(edits[0].tgt, (Span{7, 8}));
  EXPECT_EQ(edits[0].type, EditType::kInsertion);
}

TEST(AlignTest, SubstitutionCosts) {
  EXPECT_EQ(SubstitutionCost("cat", "cat"), 0);
  EXPECT_EQ(SubstitutionCost("The", "the"), 2);
  EXPECT_EQ(SubstitutionCost("cat", "cats"), 3);
  EXPECT_EQ(SubstitutionCost("go", "went"), 4);
  EXPECT_DOUBLE_EQ(CharSimilarity("abcd", "abce"), 0.75);
  EXPECT_DOUBLE_EQ(CharSimilarity("caf\xc3\xa9", "cafe"), 0.75);
}

TEST(AlignTest, TranspositionIsOneOp) {
  const Tokens src = {"I", "yesterday", "went", "home"};
  const Tokens tgt = {"I", "went", "yesterday", "home"};
  const auto ops = AlignTokens(src, tgt);
  EXPECT_EQ(AlignmentCost(ops, src, tgt), 3);
  int transposes = 0;
  for (const auto& op : ops) transposes += op.kind == OpKind::kTranspose;
  EXPECT_EQ(transposes, 1);
  const auto edits = ExtractEdits(src, tgt);
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].src, (Span{1, 3}));
  EXPECT_EQ(edits[0].type, EditType::kSubstitution);
}

TEST(AlignTest, PrefersSubstitutionOverDeleteInsert) {
  // Substitute (4) ties delete + insert (4); substitute wins.
  const auto ops = AlignTokens({"go"}, {"went"});
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0].kind, OpKind::kSubstitute);
}

TEST(AlignTest, DeletionEdit) {
  const auto edits = ExtractEdits(SplitTokens("We discussed about the plan ."),
                                  SplitTokens("We discussed the plan ."));
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].src, (Span{2, 3}));
  EXPECT_TRUE(edits[0].replacement.empty());
  EXPECT_EQ(edits[0].type, EditType::kDeletion);
}

TEST(AlignTest, AdjacentOpsMergeIntoOneEdit) {
  const auto edits =
      ExtractEdits(SplitTokens("a b c d"), SplitTokens("a x y z d"));
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].src, (Span{1, 3}));
  EXPECT_EQ(edits[0].replacement, (Tokens{"x", "y", "z"}));
}

TEST(AlignTest, IdenticalPairHasNoEdits) {
  EXPECT_TRUE(ExtractEdits(SplitTokens("a b"), SplitTokens("a b")).empty());
}

TEST(AlignTest, ApplyEditsRejectsOverlap) {
  const Tokens src = {"a", "b", "c"};
  const std::vector<Edit> edits = {
      {{0, 2}, {"x"}, {0, 1}, EditType::kSubstitution},
      {{1, 3}, {"y"}, {1, 2}, EditType::kSubstitution}};
  EXPECT_THROW(ApplyEdits(src, edits), Error);
}

TEST(AlignTest, FuzzedRoundTrip) {
  for (const auto& pair : testing::FuzzPairs(2000, 20, 1, 12, 3)) {
    ASSERT_EQ(ApplyEdits(pair.source, ExtractEdits(pair.source, pair.target)),
              pair.target)
        << JoinTokens(pair.source) << " -> " << JoinTokens(pair.target);
  }
}

TEST(AlignTest, OptimalOnRandomSmallPairs) {
  for (const auto& pair : testing::FuzzPairs(1500, 4, 1, 5, 9)) {
    const auto ops = AlignTokens(pair.source, pair.target);
    EXPECT_DOUBLE_EQ(AlignmentCost(ops, pair.source, pair.target) / 2.0,
                     testing::BruteForceAlignmentCost(pair.source, pair.target))
        << JoinTokens(pair.source) << " -> " << JoinTokens(pair.target);
  }
}

TEST(AlignTest, OptimalWithCaseAndSimilarTokens) {
  const Tokens vocab = {"a", "A", "cat", "cats"};
  Rng rng(5);
  for (int trial = 0; trial < 1500; ++trial) {
    Tokens s(rng.UniformInt(0, 5)), t(rng.UniformInt(0, 5));
    for (auto& w : s) w = vocab[rng.Below(4)];
    for (auto& w : t) w = vocab[rng.Below(4)];
    const auto ops = AlignTokens(s, t);
    ASSERT_DOUBLE_EQ(AlignmentCost(ops, s, t) / 2.0,
                     testing::BruteForceAlignmentCost(s, t))
        << JoinTokens(s) << " -> " << JoinTokens(t);
    ASSERT_EQ(ApplyEdits(s, MergeEdits(ops, s, t)), t);
  }
}

}  // namespace
}  // namespace gecaug
